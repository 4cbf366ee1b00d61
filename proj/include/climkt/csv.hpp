#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace climkt::csv {

// Splits on commas and trims surrounding whitespace (including a trailing CR).
std::vector<std::string_view> split(std::string_view line);

std::string_view trim(std::string_view s);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Shortest text that reads back to the same double.
std::string format_double(double x);

}  // namespace climkt::csv
