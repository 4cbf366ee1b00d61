#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include "climkt/market.hpp"
#include "climkt/rng.hpp"
#include "climkt/series.hpp"

namespace climkt {

class Network {
 public:
  using Edge = std::pair<TraderId, TraderId>;

  explicit Network(std::size_t n) : adjacency_(n) {}

  std::size_t size() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  // Sorted edge list with first < second in every pair.
  std::vector<Edge> edges() const;
  // Sorted ascending.
  std::span<const TraderId> neighbors(TraderId id) const { return adjacency_[id]; }
  std::size_t degree(TraderId id) const { return adjacency_[id].size(); }
  bool adjacent(TraderId a, TraderId b) const { return edges_.count(key(a, b)) != 0; }

  void add_edge(TraderId a, TraderId b);
  void remove_edge(TraderId a, TraderId b);

 private:
  static std::uint64_t key(TraderId a, TraderId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  std::vector<std::vector<TraderId>> adjacency_;
  std::unordered_set<std::uint64_t> edges_;
};

// Two phases. First every trader, in random order, links until it has degree
// two; then random links are added until the graph has n_edges edges. Each
// partner is drawn from the trader's own initial-belief class with
// probability seg and from everyone otherwise; seg == 1 forbids cross-belief
// links entirely. When the edge budget is tight the first phase rewires an
// existing edge instead of adding a surplus one, so |edges| == n_edges exactly.
Network generate_network(int n, int n_edges, double seg, std::span<const ForcingKind> initial_beliefs, Rng& rng);

// n_edges raised to n when smaller; the second member reports whether it was raised.
std::pair<int, bool> clamp_edge_count(int n, int n_edges);

// Neighbour with the most wealth; ties go to the lowest id.
TraderId richest_neighbor(const Network& net, TraderId id, std::span<const Ecu> wealth);

double cross_belief_fraction(const Network& net, std::span<const ForcingKind> beliefs);

// `trader_a,trader_b`
void write_edge_list_csv(std::ostream& out, const Network& net);

}  // namespace climkt
