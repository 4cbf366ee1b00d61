#include "climkt/network.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>

#include "climkt/error.hpp"

namespace climkt {

std::vector<Network::Edge> Network::edges() const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (TraderId a = 0; a < adjacency_.size(); ++a)
    for (TraderId b : adjacency_[a])
      if (a < b) out.emplace_back(a, b);
  return out;
}

void Network::add_edge(TraderId a, TraderId b) {
  if (a == b) throw ConstructionError("self-loop on trader " + std::to_string(a));
  if (!edges_.insert(key(a, b)).second)
    throw ConstructionError("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
  auto& na = adjacency_[a];
  auto& nb = adjacency_[b];
  na.insert(std::upper_bound(na.begin(), na.end(), b), b);
  nb.insert(std::upper_bound(nb.begin(), nb.end(), a), a);
}

void Network::remove_edge(TraderId a, TraderId b) {
  if (edges_.erase(key(a, b)) == 0) return;
  auto& na = adjacency_[a];
  auto& nb = adjacency_[b];
  na.erase(std::lower_bound(na.begin(), na.end(), b));
  nb.erase(std::lower_bound(nb.begin(), nb.end(), a));
}

std::pair<int, bool> clamp_edge_count(int n, int n_edges) {
  return n_edges < n ? std::pair{n, true} : std::pair{n_edges, false};
}

namespace {

class NetworkBuilder {
 public:
  NetworkBuilder(int n, int n_edges, double seg, std::span<const ForcingKind> beliefs, Rng& rng)
      : n_(static_cast<std::size_t>(n)),
        target_(static_cast<std::size_t>(n_edges)),
        seg_(seg),
        strict_(seg >= 1.0),
        beliefs_(beliefs),
        rng_(rng),
        net_(n_) {
    all_.resize(n_);
    std::iota(all_.begin(), all_.end(), TraderId{0});
    for (TraderId id : all_) classes_[static_cast<int>(beliefs_[id])].push_back(id);
  }

  Network build() {
    min_degree_phase();
    fill_phase();
    return std::move(net_);
  }

 private:
  bool compatible(TraderId a, TraderId b) const {
    return a != b && !net_.adjacent(a, b) && (!strict_ || beliefs_[a] == beliefs_[b]);
  }

  const std::vector<TraderId>& same_class(TraderId a) const { return classes_[static_cast<int>(beliefs_[a])]; }

  template <class Pred>
  std::optional<TraderId> draw_from(const std::vector<TraderId>& pool, Pred pred) {
    if (pool.empty()) return std::nullopt;
    for (int attempt = 0; attempt < 32; ++attempt) {
      const TraderId j = pool[uniform_index(rng_, pool.size())];
      if (pred(j)) return j;
    }
    const std::size_t offset = uniform_index(rng_, pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const TraderId j = pool[(offset + i) % pool.size()];
      if (pred(j)) return j;
    }
    return std::nullopt;
  }

  // Partner from the like-minded pool with probability seg, else from everyone;
  // an exhausted pool falls back to the other one unless seg == 1.
  template <class Pred>
  std::optional<TraderId> draw_partner(TraderId a, Pred pred) {
    const bool like_minded = strict_ || uniform01(rng_) < seg_;
    const auto& primary = like_minded ? same_class(a) : all_;
    if (auto j = draw_from(primary, pred)) return j;
    if (strict_) return std::nullopt;
    return draw_from(like_minded ? all_ : same_class(a), pred);
  }

  std::size_t total_need() const {
    std::size_t need = 0;
    for (TraderId id : all_) need += net_.degree(id) < 2 ? 2 - net_.degree(id) : 0;
    return need;
  }

  void min_degree_phase() {
    std::vector<TraderId> order = all_;
    std::shuffle(order.begin(), order.end(), rng_);
    for (TraderId a : order) {
      while (net_.degree(a) < 2) {
        if (auto j = draw_partner(a, [&](TraderId j) { return compatible(a, j) && net_.degree(j) < 2; })) {
          net_.add_edge(a, *j);
          continue;
        }
        // Linking to a saturated partner spends one edge for one unit of need;
        // only allowed while the remaining need still fits in the budget.
        const std::size_t need = total_need();
        if (net_.edge_count() + 1 + need / 2 <= target_) {
          if (auto j = draw_partner(a, [&](TraderId j) { return compatible(a, j); })) {
            net_.add_edge(a, *j);
            continue;
          }
        }
        rewire(a);
      }
    }
  }

  // Splits an existing edge u-v so that needy traders take its endpoints.
  void rewire(TraderId a) {
    std::vector<Network::Edge> edges = net_.edges();
    std::shuffle(edges.begin(), edges.end(), rng_);

    if (net_.degree(a) == 0) {
      for (auto [u, v] : edges) {
        if (u == a || v == a || !compatible(a, u) || !compatible(a, v)) continue;
        net_.remove_edge(u, v);
        net_.add_edge(a, u);
        net_.add_edge(a, v);
        return;
      }
    } else {
      std::vector<TraderId> needy;
      for (TraderId b : all_)
        if (b != a && net_.degree(b) < 2) needy.push_back(b);
      std::shuffle(needy.begin(), needy.end(), rng_);
      for (TraderId b : needy) {
        for (auto [p, q] : edges) {
          for (auto [u, v] : {std::pair{p, q}, std::pair{q, p}}) {
            if (u == a || u == b || v == a || v == b) continue;
            if (!compatible(a, u) || !compatible(b, v)) continue;
            net_.remove_edge(u, v);
            net_.add_edge(a, u);
            net_.add_edge(b, v);
            return;
          }
        }
      }
      // Move one endpoint away from a trader that has a spare link.
      for (auto [p, q] : edges) {
        for (auto [u, v] : {std::pair{p, q}, std::pair{q, p}}) {
          if (net_.degree(u) < 3 || v == a || !compatible(a, v)) continue;
          net_.remove_edge(u, v);
          net_.add_edge(a, v);
          return;
        }
      }
    }
    throw ConstructionError("cannot give trader " + std::to_string(a) + " two links within " +
                            std::to_string(target_) + " edges");
  }

  void fill_phase() {
    std::size_t failures = 0;
    while (net_.edge_count() < target_) {
      const TraderId a = all_[uniform_index(rng_, n_)];
      if (auto j = draw_partner(a, [&](TraderId j) { return compatible(a, j); })) {
        net_.add_edge(a, *j);
        failures = 0;
        continue;
      }
      if (++failures < 4 * n_) continue;
      // Nearly saturated graph: scan for any remaining admissible pair.
      bool added = false;
      for (TraderId x = 0; x < n_ && !added; ++x)
        for (TraderId y = x + 1; y < n_ && !added; ++y)
          if (compatible(x, y)) {
            net_.add_edge(x, y);
            added = true;
          }
      if (!added) throw ConstructionError("no admissible pair left before reaching " + std::to_string(target_) + " edges");
      failures = 0;
    }
  }

  std::size_t n_;
  std::size_t target_;
  double seg_;
  bool strict_;
  std::span<const ForcingKind> beliefs_;
  Rng& rng_;
  Network net_;
  std::vector<TraderId> all_;
  std::vector<TraderId> classes_[2];
};

}  // namespace

Network generate_network(int n, int n_edges, double seg, std::span<const ForcingKind> initial_beliefs, Rng& rng) {
  if (n < 4) throw ConfigError("network needs at least 4 traders, got " + std::to_string(n));
  if (initial_beliefs.size() != static_cast<std::size_t>(n)) throw ConfigError("one initial belief per trader required");
  if (!(seg >= 0.0 && seg <= 1.0)) throw ConfigError("seg must lie in [0, 1]");
  if (n_edges < n)
    throw ConstructionError("n_edges " + std::to_string(n_edges) + " < n " + std::to_string(n) +
                            ": minimum degree 2 is infeasible");

  std::size_t class_size[2] = {0, 0};
  for (ForcingKind b : initial_beliefs) ++class_size[static_cast<int>(b)];
  const auto pairs = [](std::size_t m) { return m * (m - 1) / 2; };
  std::size_t max_edges = pairs(static_cast<std::size_t>(n));
  if (seg >= 1.0) {
    max_edges = pairs(class_size[0]) + pairs(class_size[1]);
    for (std::size_t m : class_size)
      if (m > 0 && m < 3)
        throw ConstructionError("seg = 1 with a belief class of " + std::to_string(m) +
                                " traders cannot give everyone two like-minded links");
  }
  if (static_cast<std::size_t>(n_edges) > max_edges)
    throw ConstructionError("n_edges " + std::to_string(n_edges) + " exceeds the " + std::to_string(max_edges) +
                            " admissible pairs");

  return NetworkBuilder(n, n_edges, seg, initial_beliefs, rng).build();
}

TraderId richest_neighbor(const Network& net, TraderId id, std::span<const Ecu> wealth) {
  const auto nb = net.neighbors(id);
  if (nb.empty()) throw InputError("trader " + std::to_string(id) + " has no neighbours");
  TraderId best = nb.front();
  for (TraderId j : nb)
    if (wealth[j] > wealth[best]) best = j;
  return best;
}

double cross_belief_fraction(const Network& net, std::span<const ForcingKind> beliefs) {
  if (net.edge_count() == 0) return 0.0;
  std::size_t cross = 0;
  for (auto [a, b] : net.edges()) cross += beliefs[a] != beliefs[b];
  return static_cast<double>(cross) / static_cast<double>(net.edge_count());
}

void write_edge_list_csv(std::ostream& out, const Network& net) {
  out << "trader_a,trader_b\n";
  for (auto [a, b] : net.edges()) out << a << ',' << b << '\n';
}

}  // namespace climkt
