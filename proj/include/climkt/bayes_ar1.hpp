#pragma once

#include <cstddef>
#include <vector>

#include "climkt/rng.hpp"
#include "climkt/securities.hpp"
#include "climkt/series.hpp"

namespace climkt {

// Intercept and slope priors are on the forcing centred at its sample mean, so
// the intercept prior is on the anomaly scale regardless of the forcing units.
struct Ar1Priors {
  double coef_sd = 10.0;
  double sigma2_shape = 2.0;
  double sigma2_scale = 0.02;
};

struct SamplerSettings {
  int n_draws = 2000;
  int burn_in = 500;
  int thin = 1;
  Ar1Priors priors;
};

struct Ar1Draw {
  double alpha = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  double sigma = 0.0;
};

struct PosteriorDraws {
  ForcingKind kind = ForcingKind::LogCo2;
  std::vector<Ar1Draw> draws;
  // Largest split-chain potential scale reduction over the four parameters.
  double rhat_max = 1.0;

  std::size_t n_draws() const { return draws.size(); }
  bool convergence_flagged() const { return rhat_max > 1.1; }
};

struct PredictiveSample {
  int t_star = 0;
  std::vector<double> samples;
};

// Gibbs sampler: conditional on rho the quasi-differenced regression gives a
// normal draw for (alpha, beta) and an inverse-gamma draw for sigma^2;
// conditional on those, rho is normal truncated to (-1, 1). Each iteration
// costs O(1) after one pass over the data to accumulate lagged cross moments.
PosteriorDraws sample_posterior(const AnnualSeries& temps, const AnnualSeries& forcing, ForcingKind kind,
                                const SamplerSettings& settings, Rng& rng);

// Same chain computed by explicitly quasi-differencing the data every
// iteration. Kept as the test and benchmark reference for sample_posterior;
// consumes the random stream identically.
PosteriorDraws sample_posterior_reference(const AnnualSeries& temps, const AnnualSeries& forcing,
                                          ForcingKind kind, const SamplerSettings& settings, Rng& rng);

// One temperature per draw at t_star: the AR(1) residual at the last observed
// year is propagated forward with fresh innovations, then added to the trend.
PredictiveSample predictive_at(const PosteriorDraws& posterior, const AnnualSeries& temps,
                               const AnnualSeries& forcing, int t_star, Rng& rng);

// Empirical bin frequencies. The last non-empty bin takes the remainder so the
// entries sum to exactly 1 in index order.
std::vector<double> bin_probabilities(const PredictiveSample& pred, const SecuritySet& bins);

// Split-chain potential scale reduction for a single scalar chain.
double split_rhat(const std::vector<double>& chain);

// Draw from N(mean, sd^2) truncated to the open interval (lo, hi).
double truncated_normal(double mean, double sd, double lo, double hi, Rng& rng);

}  // namespace climkt
