#pragma once

#include "climkt/climate_data.hpp"
#include "climkt/rng.hpp"

namespace climkt {

struct TruthScenario {
  ClimateFit fit;
  // Already transformed; must cover fit.last_year + 1 .. fit.last_year + horizon_years.
  AnnualSeries future_forcing;
  int horizon_years = 0;
};

// Future temperatures for the years after the calibration window. The noise
// chain continues from fit.last_residual so the path splices onto the record.
AnnualSeries generate_future(const TruthScenario& scenario, Rng& rng);

}  // namespace climkt
