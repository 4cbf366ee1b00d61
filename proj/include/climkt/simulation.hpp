#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "climkt/bayes_ar1.hpp"
#include "climkt/climate_data.hpp"
#include "climkt/market.hpp"
#include "climkt/network.hpp"
#include "climkt/traders.hpp"

namespace climkt {

enum class SimMode { Historical, Future };
enum class ScoreKind { TimeAverage, Terminal };

struct ParamSet {
  double ideo = 0.5;
  int n_edge = 150;
  int n_traders = 150;
  double risk_tak = 0.5;
  double seg = 0.05;
  ForcingKind true_model = ForcingKind::LogCo2;

  friend bool operator==(const ParamSet&, const ParamSet&) = default;
};

struct SimConfig {
  ParamSet params;
  SimMode mode = SimMode::Future;
  int seq_length_years = 6;
  // 0 picks the mode default: 8 in future mode, as many as fit in historical mode.
  int n_sequences = 0;
  // 0 picks the mode default: year after the record ends (future), 1931 (historical).
  int first_trading_year = 0;
  int min_history_years = 30;
  int bins = 10;
  double bin_lo = -1.0;
  double bin_hi = 3.0;
  int sessions_per_year = 1;
  SamplerSettings inference;
  IdeologyConvention ideology = IdeologyConvention::Resistance;
  ScoreKind score = ScoreKind::TimeAverage;
  // Historical mode only: the model counted as correct.
  ForcingKind historical_truth = ForcingKind::LogCo2;
  std::uint64_t master_seed = 1;
  bool record_trades = false;
  bool record_network = false;
};

struct SequenceRecord {
  int sequence = 0;
  int end_year = 0;
  double frac_true = 0.0;
  std::size_t trades = 0;
  double realized_temperature = 0.0;
  // NaN for bins that did not trade.
  std::vector<double> mean_price;
};

struct SimResult {
  std::vector<SequenceRecord> sequences;
  double initial_frac_true = 0.0;
  double convergence_score = 0.0;
  int effective_edges = 0;
  std::vector<std::string> warnings;
  std::vector<Trade> trades;          // filled when record_trades is set
  std::vector<Network::Edge> edges;  // filled when record_network is set
};

// Years [start, end] of each trading sequence implied by the config and data.
struct SequenceWindow {
  int first_year;
  int end_year;
};
std::vector<SequenceWindow> plan_sequences(const SimConfig& config, const ClimateBundle& data);

SimResult run_simulation(const SimConfig& config, const ClimateBundle& data);

// Historical mode on the actual record: realized temperatures are never simulated.
SimResult run_historical(SimConfig config, const ClimateBundle& data);
SimResult run_historical(SimConfig config, const AnnualSeries& temperature, const AnnualSeries& log_co2,
                         const AnnualSeries& tsi);

double convergence_score(const SimResult& result, ScoreKind kind = ScoreKind::TimeAverage);

// `sequence,end_year,frac_true,trades,score`; score is the running convergence score.
void write_run_csv(std::ostream& out, const SimResult& result, ScoreKind kind);

}  // namespace climkt
