#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace climkt {

enum class ForcingKind { LogCo2, Tsi };

inline constexpr ForcingKind kAllForcings[] = {ForcingKind::LogCo2, ForcingKind::Tsi};

std::string_view to_string(ForcingKind kind);
// Accepts "co2"/"log_co2" and "tsi" (case-insensitive).
ForcingKind parse_forcing(std::string_view text);

inline ForcingKind other(ForcingKind k) {
  return k == ForcingKind::LogCo2 ? ForcingKind::Tsi : ForcingKind::LogCo2;
}

// One value per consecutive calendar year.
class AnnualSeries {
 public:
  AnnualSeries(int start_year, std::vector<double> values);

  int start_year() const { return start_year_; }
  int end_year() const { return start_year_ + static_cast<int>(values_.size()) - 1; }
  std::size_t size() const { return values_.size(); }
  bool covers(int year) const { return year >= start_year() && year <= end_year(); }
  bool covers(int from, int to) const { return covers(from) && covers(to); }

  double at(int year) const;
  std::span<const double> values() const { return values_; }
  // Values for [from, to] inclusive.
  std::span<const double> window(int from, int to) const;

  AnnualSeries slice(int from, int to) const;
  // Appends a series that starts the year after this one ends.
  AnnualSeries append(const AnnualSeries& next) const;

  friend bool operator==(const AnnualSeries&, const AnnualSeries&) = default;

 private:
  int start_year_;
  std::vector<double> values_;
};

}  // namespace climkt
