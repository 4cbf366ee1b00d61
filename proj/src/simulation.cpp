#include "climkt/simulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "climkt/csv.hpp"
#include "climkt/error.hpp"
#include "climkt/network.hpp"
#include "climkt/truth_process.hpp"

namespace climkt {
namespace {

void validate_params(const SimConfig& c) {
  const ParamSet& p = c.params;
  if (!(p.ideo >= 0.0 && p.ideo <= 1.0)) throw ConfigError("ideo must lie in [0, 1]");
  if (!(p.risk_tak >= 0.0 && p.risk_tak <= 1.0)) throw ConfigError("risk_tak must lie in [0, 1]");
  if (!(p.seg >= 0.0 && p.seg <= 1.0)) throw ConfigError("seg must lie in [0, 1]");
  if (p.n_traders < 4) throw ConfigError("n_traders must be at least 4");
  if (p.n_edge < 1) throw ConfigError("n_edge must be positive");
  if (c.seq_length_years < 1) throw ConfigError("seq_length_years must be at least 1");
  if (c.n_sequences < 0) throw ConfigError("n_sequences must be at least 1");
  if (c.sessions_per_year < 1) throw ConfigError("sessions_per_year must be at least 1");
  if (c.min_history_years < 10) throw ConfigError("min_history_years must be at least 10");
}

std::string span_text(int a, int b) { return std::to_string(a) + "-" + std::to_string(b); }

void check_ledger(const Ledger& ledger, const OrderBook& book) {
  if (!ledger.non_negative()) throw std::logic_error("ledger went negative");
  if (ledger.total_cash() != ledger.bank_cash_flow()) throw std::logic_error("cash not conserved");
  for (std::size_t s = 0; s < ledger.security_count(); ++s)
    if (ledger.total_units(s) != ledger.bank_units(s)) throw std::logic_error("holdings not conserved");
  if (!book.uncrossed()) throw std::logic_error("order book crossed");
}

double fraction_believing(const std::vector<Trader>& traders, ForcingKind model) {
  const auto n = std::count_if(traders.begin(), traders.end(), [&](const Trader& t) { return t.belief == model; });
  return static_cast<double>(n) / static_cast<double>(traders.size());
}

}  // namespace

std::vector<SequenceWindow> plan_sequences(const SimConfig& config, const ClimateBundle& data) {
  validate_params(config);
  const bool future = config.mode == SimMode::Future;
  const int first = config.first_trading_year != 0 ? config.first_trading_year
                    : future                       ? data.temperature.end_year() + 1
                                                   : 1931;
  int count = config.n_sequences;
  if (count == 0) count = future ? 8 : (data.temperature.end_year() - first + 1) / config.seq_length_years;
  if (count < 1) throw ConfigError("no complete trading sequence fits the temperature record after " + std::to_string(first));

  std::vector<SequenceWindow> out;
  for (int s = 0; s < count; ++s) {
    const int start = first + s * config.seq_length_years;
    out.push_back({start, start + config.seq_length_years - 1});
  }

  const int hist_start = data.temperature.start_year();
  if (first - hist_start < config.min_history_years)
    throw ConfigError("trading starts in " + std::to_string(first) + " but only " + std::to_string(first - hist_start) +
                      " years of calibration history precede it (need " + std::to_string(config.min_history_years) + ")");
  const int last_end = out.back().end_year;
  if (future) {
    if (!data.temperature.covers(first - 1))
      throw ConfigError("temperature record ends " + std::to_string(data.temperature.end_year()) +
                        ", before the year preceding trading (" + std::to_string(first - 1) + ")");
  } else if (!data.temperature.covers(last_end)) {
    throw ConfigError("temperature record " + span_text(hist_start, data.temperature.end_year()) +
                      " does not reach the last settlement year " + std::to_string(last_end));
  }
  for (ForcingKind k : kAllForcings)
    if (!data.forcing(k).covers(hist_start, last_end))
      throw ConfigError(std::string(to_string(k)) + " forcing " +
                        span_text(data.forcing(k).start_year(), data.forcing(k).end_year()) + " does not cover " +
                        span_text(hist_start, last_end));
  return out;
}

SimResult run_simulation(const SimConfig& config, const ClimateBundle& data) {
  const auto windows = plan_sequences(config, data);
  const ParamSet& p = config.params;
  const std::uint64_t seed = config.master_seed;
  const bool future = config.mode == SimMode::Future;
  const int hist_start = data.temperature.start_year();
  const int first = windows.front().first_year;
  const int last_end = windows.back().end_year;
  const ForcingKind truth = future ? p.true_model : config.historical_truth;

  SimResult result;

  AnnualSeries realized = data.temperature.slice(hist_start, future ? first - 1 : last_end);
  if (future) {
    const AnnualSeries history = realized;
    TruthScenario scenario{calibrate_truth(history, data.forcing(truth), truth), data.forcing(truth),
                           last_end - (first - 1)};
    Rng truth_rng = make_stream(seed, Stream::Truth);
    realized = history.append(generate_future(scenario, truth_rng));
  }

  const SecuritySet securities = SecuritySet::make_binning(config.bins, config.bin_lo, config.bin_hi);
  const std::size_t k = securities.bin_count();

  Rng trader_rng = make_stream(seed, Stream::Traders);
  std::vector<Trader> traders = init_traders(p.n_traders, p.risk_tak, p.ideo, trader_rng);
  const std::size_t n = traders.size();

  std::vector<ForcingKind> beliefs(n);
  std::transform(traders.begin(), traders.end(), beliefs.begin(), [](const Trader& t) { return t.belief; });
  const auto [edges, clamped] = clamp_edge_count(p.n_traders, p.n_edge);
  if (clamped)
    result.warnings.push_back("n_edge " + std::to_string(p.n_edge) + " raised to n_traders " + std::to_string(edges) +
                              " so every trader can have two links");
  result.effective_edges = edges;
  Rng net_rng = make_stream(seed, Stream::Network);
  const Network net = generate_network(p.n_traders, edges, p.seg, beliefs, net_rng);
  if (config.record_network) result.edges = net.edges();

  Ledger ledger(n, k);
  OrderBook book(k);
  result.initial_frac_true = fraction_believing(traders, truth);

  std::uint64_t rank = 0;
  for (std::size_t s = 0; s < windows.size(); ++s) {
    const SequenceWindow w = windows[s];
    ledger.endow_complete_sets(1);

    std::size_t trade_count = 0;
    std::vector<double> price_sum(k, 0.0);
    std::vector<std::size_t> price_n(k, 0);

    for (int t = w.first_year; t <= w.end_year; ++t) {
      // Everyone sharing a model holds the same predictive belief, so it is computed once per model.
      const AnnualSeries known = realized.slice(hist_start, t - 1);
      std::array<std::optional<std::vector<double>>, 2> reserv;
      for (ForcingKind m : kAllForcings) {
        if (std::none_of(traders.begin(), traders.end(), [&](const Trader& tr) { return tr.belief == m; })) continue;
        Rng post_rng = make_stream(seed, Stream::Posterior, {static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(m)});
        const PosteriorDraws post = sample_posterior(known, data.forcing(m), m, config.inference, post_rng);
        const PredictiveSample pred = predictive_at(post, known, data.forcing(m), w.end_year, post_rng);
        reserv[static_cast<int>(m)] = reservation_prices(bin_probabilities(pred, securities));
      }

      for (int session = 0; session < config.sessions_per_year; ++session) {
        Rng market_rng =
            make_stream(seed, Stream::Market, {static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(session)});
        std::vector<TraderId> arrivals(n);
        for (std::size_t i = 0; i < n; ++i) arrivals[i] = static_cast<TraderId>(i);
        std::shuffle(arrivals.begin(), arrivals.end(), market_rng);

        for (TraderId id : arrivals) {
          const Trader& tr = traders[id];
          const std::vector<double>& res = *reserv[static_cast<int>(tr.belief)];
          const Targets targets = choose_targets(ledger.holdings(id), market_rng);

          const Quote buy_quote = quote_prices(res[targets.buy_bin], tr.risk_tak, market_rng);
          std::optional<Order> buy =
              Order{id, targets.buy_bin, Side::Buy, Ecu::from_double(buy_quote.buy), rank++};
          std::optional<Order> sell;
          if (targets.sell_bin) {
            const Quote sell_quote = quote_prices(res[*targets.sell_bin], tr.risk_tak, market_rng);
            sell = Order{id, *targets.sell_bin, Side::Sell, Ecu::from_double(sell_quote.sell), rank++};
          }
          const ArrivalResult r = book.submit_arrival(buy, sell, ledger, t);
          for (const Trade& trade : r.trades) {
            ++trade_count;
            price_sum[trade.security] += trade.price.to_double();
            ++price_n[trade.security];
            if (config.record_trades) result.trades.push_back(trade);
          }
          if (!book.uncrossed()) throw std::logic_error("order book crossed after an arrival");
        }
        book.end_period();
        check_ledger(ledger, book);
      }
    }

    const double realized_t = realized.at(w.end_year);
    settle_sequence(ledger, securities, realized_t);
    check_ledger(ledger, book);

    // Everyone compares against post-settlement cash first, then all switch together.
    Rng revision_rng = make_stream(seed, Stream::Revision, {static_cast<std::uint64_t>(s)});
    const auto wealth = ledger.cash();
    std::vector<ForcingKind> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      const TraderId rn = richest_neighbor(net, static_cast<TraderId>(i), wealth);
      next[i] = revise_belief(traders[i], wealth[i], wealth[rn], traders[rn].belief, config.ideology, revision_rng);
    }
    for (std::size_t i = 0; i < n; ++i) traders[i].belief = next[i];

    SequenceRecord rec;
    rec.sequence = static_cast<int>(s) + 1;
    rec.end_year = w.end_year;
    rec.frac_true = fraction_believing(traders, truth);
    rec.trades = trade_count;
    rec.realized_temperature = realized_t;
    rec.mean_price.resize(k);
    for (std::size_t b = 0; b < k; ++b)
      rec.mean_price[b] = price_n[b] ? price_sum[b] / static_cast<double>(price_n[b])
                                     : std::numeric_limits<double>::quiet_NaN();
    result.sequences.push_back(std::move(rec));
  }

  result.convergence_score = convergence_score(result, config.score);
  return result;
}

SimResult run_historical(SimConfig config, const ClimateBundle& data) {
  config.mode = SimMode::Historical;
  return run_simulation(config, data);
}

SimResult run_historical(SimConfig config, const AnnualSeries& temperature, const AnnualSeries& log_co2,
                         const AnnualSeries& tsi) {
  return run_historical(std::move(config), ClimateBundle{temperature, log_co2, tsi});
}

double convergence_score(const SimResult& result, ScoreKind kind) {
  if (result.sequences.empty()) throw InputError("convergence score needs at least one sequence record");
  if (kind == ScoreKind::Terminal) return result.sequences.back().frac_true;
  double sum = 0.0;
  for (const auto& r : result.sequences) sum += r.frac_true;
  return sum / static_cast<double>(result.sequences.size());
}

void write_run_csv(std::ostream& out, const SimResult& result, ScoreKind kind) {
  out << "sequence,end_year,frac_true,trades,score\n";
  double sum = 0.0;
  for (std::size_t i = 0; i < result.sequences.size(); ++i) {
    const auto& r = result.sequences[i];
    sum += r.frac_true;
    const double score = kind == ScoreKind::Terminal ? r.frac_true : sum / static_cast<double>(i + 1);
    out << r.sequence << ',' << r.end_year << ',' << csv::format_double(r.frac_true) << ',' << r.trades << ','
        << csv::format_double(score) << '\n';
  }
}

}  // namespace climkt
