#pragma once

#include <filesystem>
#include <string_view>

#include "climkt/series.hpp"

namespace climkt {

// Calibrated truth model T = alpha + beta * F + e, e(t) = rho * e(t-1) + N(0, sigma^2).
struct ClimateFit {
  ForcingKind kind = ForcingKind::LogCo2;
  double alpha = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  double sigma = 0.0;
  double last_residual = 0.0;
  int last_year = 0;
  // Standard error of the OLS slope under the fitted AR(1) error covariance.
  double beta_se = 0.0;
};

// Reads a two-column `year,<value_column>` CSV with a header row.
AnnualSeries load_series_csv(const std::filesystem::path& path, std::string_view value_column);

AnnualSeries to_log_co2(const AnnualSeries& ppm);

// Centered 11-year moving average. Within five years of either end the window
// shrinks symmetrically to the widest centered window that fits.
AnnualSeries smooth_tsi_11yr(const AnnualSeries& wm2);

// OLS for alpha and beta, conditional least squares AR(1) on the residuals.
// `forcing` must cover every year of `temps`; extra forcing years are ignored.
ClimateFit calibrate_truth(const AnnualSeries& temps, const AnnualSeries& forcing, ForcingKind kind);

// Historical temperatures plus both transformed forcings.
struct ClimateBundle {
  AnnualSeries temperature;
  AnnualSeries log_co2;
  AnnualSeries tsi;

  const AnnualSeries& forcing(ForcingKind kind) const {
    return kind == ForcingKind::LogCo2 ? log_co2 : tsi;
  }
};

struct BundlePaths {
  std::filesystem::path temperature;
  std::filesystem::path co2;
  std::filesystem::path tsi;
};

// Loads `year,anomaly_c`, `year,ppm` and `year,wm2` files and applies the forcing transforms.
ClimateBundle load_climate_bundle(const BundlePaths& paths);

}  // namespace climkt
