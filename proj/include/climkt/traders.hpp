#pragma once

#include <optional>
#include <span>
#include <vector>

#include "climkt/market.hpp"
#include "climkt/rng.hpp"
#include "climkt/series.hpp"

namespace climkt {

// Behavioural state of one trader. Cash and holdings live in the Ledger.
struct Trader {
  TraderId id = 0;
  ForcingKind belief = ForcingKind::LogCo2;
  double risk_tak = 0.0;  // drawn once from U[0, risk_tak_max]
  double ideo = 0.0;      // drawn once from U[0, ideo_max]
};

// Exactly half of the traders get each model; for odd n the extra trader's
// model is a fair coin flip. Assignment order is shuffled.
std::vector<Trader> init_traders(int n, double risk_tak_max, double ideo_max, Rng& rng);

// Risk-neutral value of a 1-ECU binary payoff is its probability.
std::vector<double> reservation_prices(std::span<const double> bin_probabilities);

struct Quote {
  double buy = 0.0;
  double sell = 0.0;
};

// buy ~ U[(1 - r) * reserv, reserv], sell ~ U[reserv, (1 + r) * reserv], both clamped to [0, 1].
Quote quote_prices(double reserv, double risk_tak, Rng& rng);

struct Targets {
  std::size_t buy_bin = 0;
  std::optional<std::size_t> sell_bin;
};

// Buy target uniform over all bins; sell target uniform over bins held.
Targets choose_targets(std::span<const std::int64_t> holdings, Rng& rng);

enum class IdeologyConvention {
  // ideo_i is resistance: adopt with probability 1 - ideo_i.
  Resistance,
  // ideo_i is the adoption probability itself.
  Adoption,
};

// Adopts the richest neighbour's model when that neighbour is strictly richer
// and believes differently. Draws from `rng` only in that case.
ForcingKind revise_belief(const Trader& trader, Ecu own_wealth, Ecu neighbor_wealth, ForcingKind neighbor_belief,
                          IdeologyConvention convention, Rng& rng);

}  // namespace climkt
