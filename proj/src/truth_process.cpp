#include "climkt/truth_process.hpp"

#include <string>
#include <vector>

#include "climkt/error.hpp"

namespace climkt {

AnnualSeries generate_future(const TruthScenario& scenario, Rng& rng) {
  const ClimateFit& fit = scenario.fit;
  if (scenario.horizon_years <= 0) throw ConfigError("truth horizon must be positive");
  const int first = fit.last_year + 1;
  const int last = fit.last_year + scenario.horizon_years;
  if (!scenario.future_forcing.covers(first, last))
    throw InputError("future forcing must cover " + std::to_string(first) + "-" + std::to_string(last));

  std::vector<double> temps;
  temps.reserve(static_cast<std::size_t>(scenario.horizon_years));
  std::normal_distribution<double> innovation(0.0, 1.0);
  double e = fit.last_residual;
  for (int year = first; year <= last; ++year) {
    e = fit.rho * e + fit.sigma * innovation(rng);
    temps.push_back(fit.alpha + fit.beta * scenario.future_forcing.at(year) + e);
  }
  return AnnualSeries(first, std::move(temps));
}

}  // namespace climkt
