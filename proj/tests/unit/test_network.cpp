#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "climkt/error.hpp"
#include "climkt/network.hpp"
#include "climkt/traders.hpp"

using namespace climkt;

namespace {

std::vector<ForcingKind> half_half(int n) {
  std::vector<ForcingKind> b(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] = i % 2 ? ForcingKind::Tsi : ForcingKind::LogCo2;
  return b;
}

// Checks the graph against its own edge list rather than trusting the accessors.
std::string invariant_failure(const Network& net, int n_edges, double seg, const std::vector<ForcingKind>& beliefs) {
  const auto edges = net.edges();
  if (static_cast<int>(edges.size()) != n_edges) return "edge count";
  std::set<std::pair<TraderId, TraderId>> seen;
  std::vector<int> degree(net.size(), 0);
  for (auto [a, b] : edges) {
    if (a == b) return "self-loop";
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second) return "duplicate";
    ++degree[a];
    ++degree[b];
    if (seg >= 1.0 && beliefs[a] != beliefs[b]) return "cross-belief edge at seg 1";
  }
  for (std::size_t i = 0; i < degree.size(); ++i) {
    if (degree[i] < 2) return "degree below 2";
    if (static_cast<std::size_t>(degree[i]) != net.degree(static_cast<TraderId>(i))) return "adjacency mismatch";
  }
  return {};
}

}  // namespace

TEST_CASE("network invariants over a seeded fuzz of the sweep ranges") {
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    Rng rng(seed);
    const int n = 50 + static_cast<int>(uniform_index(rng, 201));
    const auto [n_edges, raised] = clamp_edge_count(n, 100 + static_cast<int>(uniform_index(rng, 101)));
    CHECK((!raised || n_edges == n));
    double seg = uniform01(rng);
    if (seed % 10 == 0) seg = 1.0;
    if (seed % 10 == 5) seg = 0.0;
    const auto traders = init_traders(n, 0.5, 0.5, rng);
    std::vector<ForcingKind> beliefs;
    for (const auto& t : traders) beliefs.push_back(t.belief);
    const auto net = generate_network(n, n_edges, seg, beliefs, rng);
    INFO("seed " << seed << " n " << n << " edges " << n_edges << " seg " << seg);
    CHECK(invariant_failure(net, n_edges, seg, beliefs) == "");
  }
}

TEST_CASE("edge budget clamping") {
  CHECK(clamp_edge_count(200, 150) == std::pair{200, true});
  CHECK(clamp_edge_count(100, 150) == std::pair{150, false});
  CHECK(clamp_edge_count(150, 150) == std::pair{150, false});
}

TEST_CASE("construction preconditions") {
  Rng rng(1);
  CHECK_THROWS_AS(generate_network(200, 150, 0.0, half_half(200), rng), ConstructionError);
  CHECK_THROWS_AS(generate_network(6, 16, 0.0, half_half(6), rng), ConstructionError);
  CHECK_THROWS_AS(generate_network(3, 3, 0.0, half_half(3), rng), ConfigError);
  std::vector<ForcingKind> lopsided(10, ForcingKind::LogCo2);
  lopsided[0] = ForcingKind::Tsi;
  lopsided[1] = ForcingKind::Tsi;
  CHECK_THROWS_AS(generate_network(10, 12, 1.0, lopsided, rng), ConstructionError);
  CHECK_NOTHROW(generate_network(10, 12, 0.99, lopsided, rng));
  // Complete graph is reachable exactly.
  const auto full = generate_network(6, 15, 0.0, half_half(6), rng);
  CHECK(full.edge_count() == 15);
}

TEST_CASE("full segmentation forbids cross-belief links") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto b = half_half(100);
    const auto net = generate_network(100, 150, 1.0, b, rng);
    CHECK(cross_belief_fraction(net, b) == 0.0);
  }
}

TEST_CASE("unsegmented cross-belief fraction matches uniform pairing") {
  double total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto b = half_half(100);
    total += cross_belief_fraction(generate_network(100, 150, 0.0, b, rng), b);
  }
  CHECK(std::abs(total / 200 - 50.0 / 99.0) < 0.05);
}

TEST_CASE("cross-belief fraction is non-increasing in seg") {
  double prev = 1.0;
  for (double seg : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    double total = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng rng(seed);
      const auto b = half_half(150);
      total += cross_belief_fraction(generate_network(150, 150, seg, b, rng), b);
    }
    const double mean = total / 100;
    CHECK(mean <= prev);
    prev = mean;
  }
}

TEST_CASE("construction is deterministic per seed") {
  const auto b = half_half(120);
  Rng a(9), c(9);
  CHECK(generate_network(120, 180, 0.4, b, a).edges() == generate_network(120, 180, 0.4, b, c).edges());
}

TEST_CASE("richest neighbour") {
  Network net(5);
  net.add_edge(0, 1);
  net.add_edge(0, 2);
  net.add_edge(0, 3);
  std::vector<Ecu> w = {Ecu::units(9), Ecu::from_double(1.0), Ecu::from_double(2.5), Ecu::from_double(0.3),
                        Ecu::units(50)};
  CHECK(richest_neighbor(net, 0, w) == 2);
  w[4] = Ecu::units(0);
  CHECK(richest_neighbor(net, 0, w) == 2);
  std::vector<Ecu> flat(5, Ecu::units(1));
  CHECK(richest_neighbor(net, 0, flat) == 1);
  CHECK(richest_neighbor(net, 3, w) == 0);
  CHECK_THROWS_AS(richest_neighbor(net, 4, w), InputError);
  CHECK_THROWS_AS(net.add_edge(1, 1), ConstructionError);
  CHECK_THROWS_AS(net.add_edge(1, 0), ConstructionError);
}

TEST_CASE("edge list CSV") {
  Network net(4);
  net.add_edge(2, 1);
  net.add_edge(0, 3);
  std::ostringstream out;
  write_edge_list_csv(out, net);
  CHECK(out.str() == "trader_a,trader_b\n0,3\n1,2\n");
}
