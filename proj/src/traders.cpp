#include "climkt/traders.hpp"

#include <algorithm>
#include <string>

#include "climkt/error.hpp"

namespace climkt {

std::vector<Trader> init_traders(int n, double risk_tak_max, double ideo_max, Rng& rng) {
  if (n < 2) throw ConfigError("need at least 2 traders, got " + std::to_string(n));
  if (!(risk_tak_max >= 0.0 && risk_tak_max <= 1.0)) throw ConfigError("risk_tak must lie in [0, 1]");
  if (!(ideo_max >= 0.0 && ideo_max <= 1.0)) throw ConfigError("ideo must lie in [0, 1]");

  const auto count = static_cast<std::size_t>(n);
  std::vector<ForcingKind> beliefs(count, ForcingKind::Tsi);
  std::fill_n(beliefs.begin(), count / 2, ForcingKind::LogCo2);
  if (count % 2 == 1) beliefs.back() = uniform01(rng) < 0.5 ? ForcingKind::LogCo2 : ForcingKind::Tsi;
  std::shuffle(beliefs.begin(), beliefs.end(), rng);

  std::vector<Trader> traders(count);
  for (std::size_t i = 0; i < count; ++i) {
    traders[i].id = static_cast<TraderId>(i);
    traders[i].belief = beliefs[i];
    traders[i].risk_tak = uniform(rng, 0.0, risk_tak_max);
    traders[i].ideo = uniform(rng, 0.0, ideo_max);
  }
  return traders;
}

std::vector<double> reservation_prices(std::span<const double> bin_probabilities) {
  return {bin_probabilities.begin(), bin_probabilities.end()};
}

Quote quote_prices(double reserv, double risk_tak, Rng& rng) {
  Quote q;
  q.buy = std::clamp(uniform(rng, (1.0 - risk_tak) * reserv, reserv), 0.0, 1.0);
  q.sell = std::clamp(uniform(rng, reserv, (1.0 + risk_tak) * reserv), 0.0, 1.0);
  return q;
}

Targets choose_targets(std::span<const std::int64_t> holdings, Rng& rng) {
  Targets t;
  t.buy_bin = uniform_index(rng, holdings.size());
  std::size_t held = 0;
  for (auto h : holdings) held += h > 0;
  if (held > 0) {
    std::size_t pick = uniform_index(rng, held);
    for (std::size_t b = 0; b < holdings.size(); ++b) {
      if (holdings[b] <= 0) continue;
      if (pick-- == 0) {
        t.sell_bin = b;
        break;
      }
    }
  }
  return t;
}

ForcingKind revise_belief(const Trader& trader, Ecu own_wealth, Ecu neighbor_wealth, ForcingKind neighbor_belief,
                          IdeologyConvention convention, Rng& rng) {
  if (!(neighbor_wealth > own_wealth) || neighbor_belief == trader.belief) return trader.belief;
  const double adopt = convention == IdeologyConvention::Resistance ? 1.0 - trader.ideo : trader.ideo;
  return uniform01(rng) < adopt ? neighbor_belief : trader.belief;
}

}  // namespace climkt
