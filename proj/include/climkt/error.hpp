#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace climkt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unusable input data or configuration. The CLI maps this family to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  enum class Kind { MissingFile, BadHeader, Malformed, YearGap, DuplicateYear, Empty };

  ParseError(Kind kind, std::string path, std::size_t line, const std::string& what)
      : InputError(path + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        kind_(kind),
        path_(std::move(path)),
        line_(line) {}

  Kind kind() const { return kind_; }
  const std::string& path() const { return path_; }
  // 1-based line number in the source file; 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::string path_;
  std::size_t line_;
};

// The regressor has no variance, so the slope is not identified.
class SingularDesignError : public InputError {
 public:
  using InputError::InputError;
};

// The requested social network cannot exist (too many edges, or a belief
// class too small to give every member two like-minded partners).
class ConstructionError : public InputError {
 public:
  using InputError::InputError;
};

// A correlation is undefined because a column is constant.
class UndefinedPrccError : public InputError {
 public:
  UndefinedPrccError(std::string column, const std::string& what)
      : InputError(what), column_(std::move(column)) {}
  const std::string& column() const { return column_; }

 private:
  std::string column_;
};

}  // namespace climkt
