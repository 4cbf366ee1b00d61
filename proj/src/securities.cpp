#include "climkt/securities.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "climkt/error.hpp"

namespace climkt {

SecuritySet::SecuritySet(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.empty()) throw ConfigError("a security set needs at least one edge (k >= 2)");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!std::isfinite(edges_[i])) throw ConfigError("bin edges must be finite");
    if (i > 0 && !(edges_[i] > edges_[i - 1])) throw ConfigError("bin edges must be strictly ascending");
  }
}

SecuritySet SecuritySet::make_binning(int k, double lo, double hi) {
  if (k < 2) throw ConfigError("need at least 2 bins, got " + std::to_string(k));
  if (!(lo < hi)) throw ConfigError("bin range must satisfy lo < hi");
  if (k == 2) return SecuritySet({0.5 * (lo + hi)});
  const int interior = k - 2;
  std::vector<double> edges(static_cast<std::size_t>(k - 1));
  for (int i = 0; i <= interior; ++i) edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / interior;
  edges.back() = hi;
  return SecuritySet(std::move(edges));
}

std::size_t SecuritySet::bin_of(double temperature) const {
  return static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), temperature) - edges_.begin());
}

}  // namespace climkt
