#pragma once

// Independent reference computations. Nothing here calls into the library so
// that a shared bug cannot make both sides agree.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

// y_t = alpha + beta * x_t + e_t with e_t = rho * e_{t-1} + N(0, sigma^2),
// e_0 drawn from the stationary distribution.
inline std::vector<double> ar1_regression(const std::vector<double>& x, double alpha, double beta, double rho,
                                          double sigma, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> y(x.size());
  double e = sigma / std::sqrt(1.0 - rho * rho) * z(gen);
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (t > 0) e = rho * e + sigma * z(gen);
    y[t] = alpha + beta * x[t] + e;
  }
  return y;
}

// A smooth increasing forcing shaped like ln(CO2) over 1880-2014.
inline std::vector<double> log_co2_like(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double u = static_cast<double>(t) / static_cast<double>(n);
    x[t] = 5.67 + 0.35 * u * u + 0.05 * u;
  }
  return x;
}

struct Line {
  double intercept;
  double slope;
};

// Normal equations solved by Cramer's rule.
inline Line ols(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  return {(sy * sxx - sx * sxy) / det, (n * sxy - sx * sy) / det};
}

inline double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

// Average ranks by counting: rank = 1 + #smaller + (#equal - 1) / 2. O(n^2).
inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double w : v) {
      less += w < v[i];
      equal += w == v[i];
    }
    r[i] = 1.0 + less + (equal - 1.0) / 2.0;
  }
  return r;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean(a), mb = mean(b);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

using Matrix = std::vector<std::vector<double>>;

// Gauss-Jordan inverse with partial pivoting.
inline Matrix invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (std::abs(a[p][c]) < 1e-300) throw std::runtime_error("singular matrix");
    std::swap(a[c], a[p]);
    std::swap(inv[c], inv[p]);
    const double d = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= d;
      inv[c][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

// PRCC from the inverse of the rank correlation matrix of [x_1 .. x_p, y]:
// prcc_j = -P(j, y) / sqrt(P(j, j) P(y, y)).
inline std::vector<double> prcc_by_inversion(const std::vector<std::vector<double>>& columns,
                                             const std::vector<double>& y) {
  std::vector<std::vector<double>> r;
  for (const auto& c : columns) r.push_back(ranks(c));
  r.push_back(ranks(y));
  const std::size_t m = r.size();
  Matrix corr(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) corr[i][j] = i == j ? 1.0 : pearson(r[i], r[j]);
  const Matrix p = invert(corr);
  std::vector<double> out;
  const std::size_t yi = m - 1;
  for (std::size_t j = 0; j < columns.size(); ++j) out.push_back(-p[j][yi] / std::sqrt(p[j][j] * p[yi][yi]));
  return out;
}

// One-sided exact sign test: P(X >= wins) for X ~ Binomial(trials, 1/2).
inline double sign_test_p(int wins, int trials) {
  double p = 0.0;
  for (int k = wins; k <= trials; ++k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * static_cast<double>(trials - i) / static_cast<double>(i + 1);
    p += c * std::pow(0.5, trials);
  }
  return p;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace oracle
