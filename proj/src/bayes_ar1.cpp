#include "climkt/bayes_ar1.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "climkt/error.hpp"

namespace climkt {
namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Forcing centred at its sample mean; the intercept is recovered afterwards.
struct Prepared {
  std::vector<double> x;
  std::vector<double> y;
  double x_center = 0.0;
};

Prepared prepare(const AnnualSeries& temps, const AnnualSeries& forcing) {
  if (temps.size() < 10) throw InputError("posterior needs at least 10 years, got " + std::to_string(temps.size()));
  if (!forcing.covers(temps.start_year(), temps.end_year()))
    throw InputError("forcing does not cover temperature years " + std::to_string(temps.start_year()) + "-" +
                     std::to_string(temps.end_year()));
  const auto y = temps.values();
  const auto x = forcing.window(temps.start_year(), temps.end_year());
  Prepared d;
  d.x_center = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  d.x.reserve(x.size());
  double sxx = 0.0;
  for (double v : x) {
    d.x.push_back(v - d.x_center);
    sxx += d.x.back() * d.x.back();
  }
  const double scale = std::max(1.0, std::abs(d.x_center));
  if (!(sxx > static_cast<double>(x.size()) * 1e-24 * scale * scale))
    throw SingularDesignError("forcing has zero variance over the estimation window");
  d.y.assign(y.begin(), y.end());
  return d;
}

double quad(const Mat3& m, const std::array<double, 3>& w) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += w[i] * m[i][j] * w[j];
  return s;
}

// Lagged cross moments of c_t = (1, x_t, y_t) and l_t = c_{t-1} over t = 1..n-1.
// Quasi-differenced moments and residual autocovariances are quadratic forms in them.
class MomentKernel {
 public:
  explicit MomentKernel(const Prepared& d) : pairs_(d.y.size() - 1) {
    for (std::size_t t = 1; t < d.y.size(); ++t) {
      const std::array<double, 3> c{1.0, d.x[t], d.y[t]};
      const std::array<double, 3> l{1.0, d.x[t - 1], d.y[t - 1]};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          cc_[i][j] += c[i] * c[j];
          ll_[i][j] += l[i] * l[j];
          cl_[i][j] += c[i] * l[j];
        }
    }
  }

  std::size_t pairs() const { return pairs_; }

  // sum over t of q_t q_t' with q_t = c_t - rho * l_t.
  Mat3 quasi(double rho) const {
    Mat3 s{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s[i][j] = cc_[i][j] - rho * (cl_[i][j] + cl_[j][i]) + rho * rho * ll_[i][j];
    return s;
  }

  // (sum e_t e_{t-1}, sum e_{t-1}^2) for residuals e_t = y_t - a - b x_t.
  std::pair<double, double> lag(double a, double b) const {
    const std::array<double, 3> w{-a, -b, 1.0};
    return {quad(cl_, w), quad(ll_, w)};
  }

 private:
  std::size_t pairs_;
  Mat3 cc_{}, ll_{}, cl_{};
};

// Same quantities by explicit passes over the data.
class LoopKernel {
 public:
  explicit LoopKernel(const Prepared& d) : d_(d) {}

  std::size_t pairs() const { return d_.y.size() - 1; }

  Mat3 quasi(double rho) const {
    Mat3 s{};
    for (std::size_t t = 1; t < d_.y.size(); ++t) {
      const std::array<double, 3> q{1.0 - rho, d_.x[t] - rho * d_.x[t - 1], d_.y[t] - rho * d_.y[t - 1]};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s[i][j] += q[i] * q[j];
    }
    return s;
  }

  std::pair<double, double> lag(double a, double b) const {
    double num = 0.0, den = 0.0;
    double prev = d_.y[0] - a - b * d_.x[0];
    for (std::size_t t = 1; t < d_.y.size(); ++t) {
      const double e = d_.y[t] - a - b * d_.x[t];
      num += e * prev;
      den += prev * prev;
      prev = e;
    }
    return {num, den};
  }

 private:
  const Prepared& d_;
};

void check_settings(const SamplerSettings& s) {
  if (s.n_draws < 500) throw ConfigError("n_draws must be at least 500, got " + std::to_string(s.n_draws));
  if (s.burn_in < 0) throw ConfigError("burn_in must be non-negative");
  if (s.thin < 1) throw ConfigError("thin must be at least 1");
  if (!(s.priors.coef_sd > 0.0) || !(s.priors.sigma2_shape > 0.0) || !(s.priors.sigma2_scale > 0.0))
    throw ConfigError("prior scales must be positive");
}

template <class Kernel>
PosteriorDraws run_chain(const Kernel& kernel, const Prepared& d, ForcingKind kind, const SamplerSettings& settings,
                         Rng& rng) {
  check_settings(settings);
  const double m = static_cast<double>(kernel.pairs());
  const double prior_prec = 1.0 / (settings.priors.coef_sd * settings.priors.coef_sd);
  const double shape = settings.priors.sigma2_shape + 0.5 * m;

  // Start from OLS on the centred design.
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t t = 0; t < d.y.size(); ++t) {
    sxx += d.x[t] * d.x[t];
    sxy += d.x[t] * d.y[t];
  }
  double b = sxy / sxx;
  double a = std::accumulate(d.y.begin(), d.y.end(), 0.0) / static_cast<double>(d.y.size());
  auto [num0, den0] = kernel.lag(a, b);
  double rho = den0 > 0.0 ? std::clamp(num0 / den0, -0.95, 0.95) : 0.0;
  double sigma2 = std::max(1e-8, kernel.quasi(rho)[2][2] / m);

  PosteriorDraws out;
  out.kind = kind;
  out.draws.reserve(static_cast<std::size_t>(settings.n_draws));

  std::normal_distribution<double> normal(0.0, 1.0);
  const long total = settings.burn_in + static_cast<long>(settings.n_draws) * settings.thin;
  for (long it = 0; it < total; ++it) {
    const Mat3 s = kernel.quasi(rho);

    // (a, b) | rho, sigma2: precision P = Z'Z / sigma2 + I / tau^2.
    const double p00 = s[0][0] / sigma2 + prior_prec;
    const double p01 = s[0][1] / sigma2;
    const double p11 = s[1][1] / sigma2 + prior_prec;
    const double r0 = s[0][2] / sigma2;
    const double r1 = s[1][2] / sigma2;
    const double l11 = std::sqrt(p00);
    const double l21 = p01 / l11;
    const double l22 = std::sqrt(std::max(p11 - l21 * l21, 1e-300));
    // Mean solves L L' mu = r.
    const double f0 = r0 / l11;
    const double f1 = (r1 - l21 * f0) / l22;
    const double mu1 = f1 / l22;
    const double mu0 = (f0 - l21 * mu1) / l11;
    const double z0 = normal(rng);
    const double z1 = normal(rng);
    const double v1 = z1 / l22;
    const double v0 = (z0 - l21 * v1) / l11;
    a = mu0 + v0;
    b = mu1 + v1;

    // sigma2 | a, b, rho: inverse gamma.
    const double ssr = std::max(0.0, quad(s, {-a, -b, 1.0}));
    const double rate = settings.priors.sigma2_scale + 0.5 * ssr;
    sigma2 = 1.0 / std::gamma_distribution<double>(shape, 1.0 / rate)(rng);

    // rho | a, b, sigma2: normal truncated to (-1, 1).
    const auto [num, den] = kernel.lag(a, b);
    const double den_safe = std::max(den, 1e-300);
    rho = truncated_normal(num / den_safe, std::sqrt(sigma2 / den_safe), -1.0, 1.0, rng);

    if (it >= settings.burn_in && (it - settings.burn_in) % settings.thin == 0)
      out.draws.push_back({a - b * d.x_center, b, rho, std::sqrt(sigma2)});
  }

  std::vector<double> chain(out.draws.size());
  double worst = 1.0;
  for (auto field : {&Ar1Draw::alpha, &Ar1Draw::beta, &Ar1Draw::rho, &Ar1Draw::sigma}) {
    std::transform(out.draws.begin(), out.draws.end(), chain.begin(), [&](const Ar1Draw& dr) { return dr.*field; });
    worst = std::max(worst, split_rhat(chain));
  }
  out.rhat_max = worst;
  return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_ccdf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

double truncated_normal(double mean, double sd, double lo, double hi, Rng& rng) {
  if (!(sd > 0.0) || !std::isfinite(sd)) return std::clamp(mean, std::nextafter(lo, hi), std::nextafter(hi, lo));
  std::normal_distribution<double> normal(mean, sd);
  for (int attempt = 0; attempt < 16; ++attempt) {
    const double v = normal(rng);
    if (v > lo && v < hi) return v;
  }
  // Most mass is outside the interval; invert the CDF on the side with better precision.
  const double a = (lo - mean) / sd;
  const double b = (hi - mean) / sd;
  const double u = uniform01(rng);
  double z;
  if (a > 0.0) {
    const double qa = normal_ccdf(a), qb = normal_ccdf(b);
    const double p = qa - u * (qa - qb);
    z = std::sqrt(2.0) * boost::math::erfc_inv(2.0 * std::clamp(p, 1e-300, 1.0));
  } else {
    const double pa = normal_cdf(a), pb = normal_cdf(b);
    const double p = pa + u * (pb - pa);
    z = -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * std::clamp(p, 1e-300, 1.0));
  }
  return std::clamp(mean + sd * z, std::nextafter(lo, hi), std::nextafter(hi, lo));
}

double split_rhat(const std::vector<double>& chain) {
  const std::size_t half = chain.size() / 2;
  if (half < 2) return 1.0;
  auto moments = [&](std::size_t from) {
    double mean = 0.0;
    for (std::size_t i = 0; i < half; ++i) mean += chain[from + i];
    mean /= static_cast<double>(half);
    double var = 0.0;
    for (std::size_t i = 0; i < half; ++i) var += (chain[from + i] - mean) * (chain[from + i] - mean);
    return std::pair{mean, var / static_cast<double>(half - 1)};
  };
  const auto [m1, v1] = moments(0);
  const auto [m2, v2] = moments(chain.size() - half);
  const double n = static_cast<double>(half);
  const double w = 0.5 * (v1 + v2);
  const double grand = 0.5 * (m1 + m2);
  const double b = n * ((m1 - grand) * (m1 - grand) + (m2 - grand) * (m2 - grand));
  if (!(w > 0.0)) return b > 0.0 ? INFINITY : 1.0;
  const double var_plus = (n - 1.0) / n * w + b / n;
  return std::sqrt(var_plus / w);
}

PosteriorDraws sample_posterior(const AnnualSeries& temps, const AnnualSeries& forcing, ForcingKind kind,
                                const SamplerSettings& settings, Rng& rng) {
  const Prepared d = prepare(temps, forcing);
  return run_chain(MomentKernel(d), d, kind, settings, rng);
}

PosteriorDraws sample_posterior_reference(const AnnualSeries& temps, const AnnualSeries& forcing,
                                          ForcingKind kind, const SamplerSettings& settings, Rng& rng) {
  const Prepared d = prepare(temps, forcing);
  return run_chain(LoopKernel(d), d, kind, settings, rng);
}

PredictiveSample predictive_at(const PosteriorDraws& posterior, const AnnualSeries& temps,
                               const AnnualSeries& forcing, int t_star, Rng& rng) {
  const int last = temps.end_year();
  if (t_star <= last)
    throw InputError("settlement year " + std::to_string(t_star) + " must follow the last observed year " +
                     std::to_string(last));
  if (!forcing.covers(last, t_star))
    throw InputError("forcing does not cover " + std::to_string(last) + "-" + std::to_string(t_star));
  if (posterior.draws.empty()) throw InputError("posterior has no draws");

  const double y_last = temps.at(last);
  const double f_last = forcing.at(last);
  const double f_star = forcing.at(t_star);
  const int horizon = t_star - last;

  PredictiveSample out;
  out.t_star = t_star;
  out.samples.reserve(posterior.draws.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const Ar1Draw& d : posterior.draws) {
    // e(t*) = rho^h e(last) + sigma * sqrt(sum_{i<h} rho^{2i}) * z
    double rho_h = 1.0, acc = 0.0, rho2_i = 1.0;
    for (int i = 0; i < horizon; ++i) {
      acc += rho2_i;
      rho2_i *= d.rho * d.rho;
      rho_h *= d.rho;
    }
    const double e_last = y_last - d.alpha - d.beta * f_last;
    const double e_star = rho_h * e_last + d.sigma * std::sqrt(acc) * normal(rng);
    out.samples.push_back(d.alpha + d.beta * f_star + e_star);
  }
  return out;
}

std::vector<double> bin_probabilities(const PredictiveSample& pred, const SecuritySet& bins) {
  if (pred.samples.empty()) throw InputError("predictive sample is empty");
  std::vector<std::size_t> counts(bins.bin_count(), 0);
  for (double s : pred.samples) ++counts[bins.bin_of(s)];

  const double n = static_cast<double>(pred.samples.size());
  std::vector<double> p(counts.size(), 0.0);
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > 0) last_nonzero = i;
  double head = 0.0;
  for (std::size_t i = 0; i < last_nonzero; ++i) {
    p[i] = static_cast<double>(counts[i]) / n;
    head += p[i];
  }
  p[last_nonzero] = 1.0 - head;
  return p;
}

}  // namespace climkt
