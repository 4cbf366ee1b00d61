#include "climkt/series.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

#include "climkt/error.hpp"

namespace climkt {

std::string_view to_string(ForcingKind kind) { return kind == ForcingKind::LogCo2 ? "co2" : "tsi"; }

ForcingKind parse_forcing(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "co2" || t == "log_co2" || t == "1") return ForcingKind::LogCo2;
  if (t == "tsi" || t == "0") return ForcingKind::Tsi;
  throw ConfigError("unknown climate model '" + std::string(text) + "' (expected co2 or tsi)");
}

AnnualSeries::AnnualSeries(int start_year, std::vector<double> values)
    : start_year_(start_year), values_(std::move(values)) {
  if (values_.empty()) throw DomainError("annual series must not be empty");
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw DomainError("non-finite value for year " + std::to_string(start_year_ + static_cast<int>(i)));
}

double AnnualSeries::at(int year) const {
  if (!covers(year))
    throw std::out_of_range("year " + std::to_string(year) + " outside series " + std::to_string(start_year()) +
                            "-" + std::to_string(end_year()));
  return values_[static_cast<std::size_t>(year - start_year_)];
}

std::span<const double> AnnualSeries::window(int from, int to) const {
  if (from > to || !covers(from, to))
    throw std::out_of_range("window " + std::to_string(from) + "-" + std::to_string(to) + " outside series " +
                            std::to_string(start_year()) + "-" + std::to_string(end_year()));
  return std::span<const double>(values_).subspan(static_cast<std::size_t>(from - start_year_),
                                                  static_cast<std::size_t>(to - from + 1));
}

AnnualSeries AnnualSeries::slice(int from, int to) const {
  const auto w = window(from, to);
  return AnnualSeries(from, std::vector<double>(w.begin(), w.end()));
}

AnnualSeries AnnualSeries::append(const AnnualSeries& next) const {
  if (next.start_year() != end_year() + 1)
    throw DomainError("appended series must start in " + std::to_string(end_year() + 1));
  std::vector<double> v = values_;
  v.insert(v.end(), next.values_.begin(), next.values_.end());
  return AnnualSeries(start_year_, std::move(v));
}

}  // namespace climkt
