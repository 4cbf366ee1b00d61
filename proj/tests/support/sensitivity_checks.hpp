#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "climkt/sensitivity.hpp"
#include "oracles.hpp"

namespace checks {

// Empty when every continuous column has exactly one point per stratum and the
// parameter values are the documented maps of the unit coordinates.
inline std::string lhs_problem(const climkt::DesignMatrix& d) {
  const std::size_t n = d.n_points();
  if (d.unit.size() != n) return "unit coordinates missing";
  for (std::size_t dim = 0; dim < 5; ++dim) {
    std::vector<int> hits(n, 0);
    for (const auto& u : d.unit) {
      if (!(u[dim] >= 0.0 && u[dim] < 1.0)) return "coordinate outside [0,1)";
      ++hits[static_cast<std::size_t>(std::floor(u[dim] * static_cast<double>(n)))];
    }
    if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; }))
      return "column " + std::to_string(dim) + " not stratified";
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = d.rows[i];
    const auto& u = d.unit[i];
    if (p.ideo != u[0] || p.risk_tak != u[3] || p.seg != u[4]) return "continuous value differs from its coordinate";
    if (p.n_edge != static_cast<int>(std::floor(100.0 + 100.0 * u[1] + 0.5))) return "n_edge rounding";
    if (p.n_traders != static_cast<int>(std::floor(50.0 + 200.0 * u[2] + 0.5))) return "n_traders rounding";
    if (p.n_edge < 100 || p.n_edge > 200 || p.n_traders < 50 || p.n_traders > 250) return "integer range";
  }
  return {};
}

struct Instance {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<std::vector<double>> columns;
  std::vector<double> yv;
};

// n rows, p columns of mixed shapes (continuous, tied integers, binary), with y
// depending monotonically on some of them plus noise.
inline Instance random_instance(std::uint32_t seed, int n = 50, int p = 4) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Instance in;
  in.x.resize(n, p);
  in.y.resize(n);
  in.columns.assign(static_cast<std::size_t>(p), std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    double y = 0.0;
    for (int j = 0; j < p; ++j) {
      double v = u(gen);
      if (j == 1) v = std::floor(v * 8.0);
      if (j == 3) v = v < 0.5 ? 0.0 : 1.0;
      in.x(i, j) = v;
      in.columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
      y += (j % 2 ? -1.0 : 1.0) * (1.0 + j) * v;
    }
    y += 2.0 * u(gen);
    in.y(i) = std::exp(y);
    in.yv.push_back(in.y(i));
  }
  return in;
}

inline double prcc_oracle_gap(const Instance& in) {
  const auto got = climkt::prcc(in.x, in.y);
  const auto want = oracle::prcc_by_inversion(in.columns, in.yv);
  double gap = 0.0;
  for (std::size_t j = 0; j < got.size(); ++j) gap = std::max(gap, std::abs(got[j] - want[j]));
  return gap;
}

}  // namespace checks
