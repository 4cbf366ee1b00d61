#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace climkt {

// Binary range securities partitioning the anomaly axis into k bins.
// Bin 0 is open below, bin k-1 open above. A temperature exactly on an edge
// belongs to the upper bin.
class SecuritySet {
 public:
  explicit SecuritySet(std::vector<double> edges);

  // k-2 equal interior bins over [lo, hi] plus two open end bins. k == 2 puts a
  // single edge at the midpoint.
  static SecuritySet make_binning(int k, double lo, double hi);

  std::size_t bin_count() const { return edges_.size() + 1; }
  std::span<const double> edges() const { return edges_; }
  std::size_t bin_of(double temperature) const;

  friend bool operator==(const SecuritySet&, const SecuritySet&) = default;

 private:
  std::vector<double> edges_;
};

}  // namespace climkt
