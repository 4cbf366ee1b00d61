#include "climkt/climate_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "climkt/csv.hpp"
#include "climkt/error.hpp"

namespace climkt {

AnnualSeries load_series_csv(const std::filesystem::path& path, std::string_view value_column) {
  const std::string where = path.string();
  std::ifstream in(path);
  if (!in) throw ParseError(ParseError::Kind::MissingFile, where, 0, "cannot open file");

  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  int start_year = 0;
  int prev_year = 0;
  std::vector<double> values;

  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    const auto fields = csv::split(line);
    if (!have_header) {
      if (fields.size() != 2 || fields[0] != "year" || fields[1] != value_column)
        throw ParseError(ParseError::Kind::BadHeader, where, line_no,
                         "expected header 'year," + std::string(value_column) + "'");
      have_header = true;
      continue;
    }
    if (fields.size() != 2)
      throw ParseError(ParseError::Kind::Malformed, where, line_no, "expected 2 fields, found " +
                                                                        std::to_string(fields.size()));
    const auto year = csv::parse_int(fields[0]);
    const auto value = csv::parse_double(fields[1]);
    if (!year) throw ParseError(ParseError::Kind::Malformed, where, line_no, "bad year '" + std::string(fields[0]) + "'");
    if (!value || !std::isfinite(*value))
      throw ParseError(ParseError::Kind::Malformed, where, line_no, "bad value '" + std::string(fields[1]) + "'");

    const int y = static_cast<int>(*year);
    if (values.empty()) {
      start_year = y;
    } else if (y <= prev_year) {
      throw ParseError(ParseError::Kind::DuplicateYear, where, line_no,
                       "duplicate or out-of-order year " + std::to_string(y) + " after " + std::to_string(prev_year));
    } else if (y != prev_year + 1) {
      throw ParseError(ParseError::Kind::YearGap, where, line_no,
                       "year gap: expected " + std::to_string(prev_year + 1) + ", found " + std::to_string(y));
    }
    prev_year = y;
    values.push_back(*value);
  }
  if (!have_header) throw ParseError(ParseError::Kind::BadHeader, where, 0, "missing header row");
  if (values.empty()) throw ParseError(ParseError::Kind::Empty, where, 0, "no data rows");
  return AnnualSeries(start_year, std::move(values));
}

AnnualSeries to_log_co2(const AnnualSeries& ppm) {
  std::vector<double> out;
  out.reserve(ppm.size());
  int year = ppm.start_year();
  for (double c : ppm.values()) {
    if (!(c > 0.0))
      throw DomainError("non-positive CO2 concentration " + csv::format_double(c) + " in " + std::to_string(year));
    out.push_back(std::log(c));
    ++year;
  }
  return AnnualSeries(ppm.start_year(), std::move(out));
}

AnnualSeries smooth_tsi_11yr(const AnnualSeries& wm2) {
  const auto v = wm2.values();
  const std::size_t n = v.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + v[i];

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t half = std::min<std::size_t>({5, i, n - 1 - i});
    const std::size_t lo = i - half, hi = i + half + 1;
    out[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  return AnnualSeries(wm2.start_year(), std::move(out));
}

ClimateFit calibrate_truth(const AnnualSeries& temps, const AnnualSeries& forcing, ForcingKind kind) {
  if (temps.size() < 10) throw InputError("calibration needs at least 10 years, got " + std::to_string(temps.size()));
  if (!forcing.covers(temps.start_year(), temps.end_year()))
    throw InputError("forcing does not cover temperature years " + std::to_string(temps.start_year()) + "-" +
                     std::to_string(temps.end_year()));

  const auto y = temps.values();
  const auto x = forcing.window(temps.start_year(), temps.end_year());
  const std::size_t n = y.size();
  const double nd = static_cast<double>(n);

  const double xm = std::accumulate(x.begin(), x.end(), 0.0) / nd;
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / nd;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
    syy += (y[i] - ym) * (y[i] - ym);
  }
  const double x_scale = std::max(1.0, std::abs(xm));
  if (!(sxx > nd * 1e-24 * x_scale * x_scale))
    throw SingularDesignError("forcing has zero variance over the calibration window");

  ClimateFit fit;
  fit.kind = kind;
  fit.beta = sxy / sxx;
  fit.alpha = ym - fit.beta * xm;
  fit.last_year = temps.end_year();

  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = y[i] - fit.alpha - fit.beta * x[i];
  fit.last_residual = e.back();

  double num = 0.0, den = 0.0, ee = 0.0;
  for (std::size_t t = 1; t < n; ++t) {
    num += e[t] * e[t - 1];
    den += e[t - 1] * e[t - 1];
  }
  for (double r : e) ee += r * r;

  // Exact fits leave only rounding noise in the residuals; rho is then not identified.
  const double y_scale = std::max(1.0, std::sqrt(syy / nd) + std::abs(ym));
  const bool residuals_vanish = std::sqrt(ee / nd) <= 1e-9 * y_scale;
  fit.rho = residuals_vanish ? 0.0 : std::clamp(num / den, -0.999, 0.999);

  double ssr = 0.0;
  for (std::size_t t = 1; t < n; ++t) {
    const double u = e[t] - fit.rho * e[t - 1];
    ssr += u * u;
  }
  fit.sigma = std::sqrt(ssr / static_cast<double>(n - 1));

  // Var(beta_ols) = w' Omega w with w_t = (x_t - xm) / Sxx and the AR(1)
  // autocovariance gamma(h) = sigma^2 rho^|h| / (1 - rho^2).
  const double gamma0 = fit.sigma * fit.sigma / (1.0 - fit.rho * fit.rho);
  double var = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double ws = (x[s] - xm) / sxx;
    double rho_h = 1.0;
    double acc = 0.0;
    for (std::size_t t = s; t < n; ++t) {
      const double wt = (x[t] - xm) / sxx;
      acc += (t == s ? 1.0 : 2.0) * wt * rho_h;
      rho_h *= fit.rho;
    }
    var += ws * acc;
  }
  fit.beta_se = std::sqrt(std::max(0.0, var * gamma0));
  return fit;
}

ClimateBundle load_climate_bundle(const BundlePaths& paths) {
  return ClimateBundle{
      load_series_csv(paths.temperature, "anomaly_c"),
      to_log_co2(load_series_csv(paths.co2, "ppm")),
      smooth_tsi_11yr(load_series_csv(paths.tsi, "wm2")),
  };
}

}  // namespace climkt
