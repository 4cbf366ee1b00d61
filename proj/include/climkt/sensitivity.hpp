#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "climkt/rng.hpp"
#include "climkt/simulation.hpp"

namespace climkt {

inline constexpr std::size_t kParamCount = 6;
inline constexpr std::array<const char*, kParamCount> kParamNames = {"ideo",     "n_edge", "n_traders",
                                                                     "risk_tak", "seg",    "true_model"};

struct DesignMatrix {
  std::vector<ParamSet> rows;
  // Stratified unit-cube coordinates of the five continuous columns, in
  // kParamNames order (ideo, n_edge, n_traders, risk_tak, seg).
  std::vector<std::array<double, 5>> unit;

  std::size_t n_points() const { return rows.size(); }
};

// Latin hypercube over the five continuous parameters; n_edge and n_traders are
// mapped to U(100, 200) and U(50, 250) and rounded half up; true_model is an
// independent Bernoulli(0.5).
DesignMatrix lhs_sample(int n, Rng& rng);

// Encodes a parameter set in kParamNames order, true_model as 1 for CO2.
std::array<double, kParamCount> encode(const ParamSet& p);

struct SweepRow {
  std::size_t index = 0;
  ParamSet params;
  double mean_score = 0.0;
  int replicates_ok = 0;
  int replicates = 0;
  bool excluded = false;
  std::string note;
};

struct SweepResult {
  std::vector<SweepRow> rows;

  // Included rows only.
  Eigen::MatrixXd x() const;
  Eigen::VectorXd y() const;
};

// Score of one replicate of one design row. Throwing marks the replicate failed.
using ReplicateRunner = std::function<double(std::size_t row, int replicate, const SimConfig& config)>;

// Config for replicate r of design row i: the row's parameters over `base`,
// with a seed derived from (base seed, i, r).
SimConfig replicate_config(const SimConfig& base, const ParamSet& params, std::size_t row, int replicate);

// A row keeps the mean over its successful replicates when at least 80% of
// them succeed; otherwise it is excluded with a reason.
SweepRow reduce_row(std::size_t index, const ParamSet& params, std::span<const std::optional<double>> scores);

// Rows [first, last) of the design, replicates spread over `workers` OpenMP threads.
std::vector<SweepRow> run_sweep_rows(const DesignMatrix& design, std::size_t first, std::size_t last,
                                     int replicates, const SimConfig& base, const ReplicateRunner& runner,
                                     int workers);

SweepResult run_sweep(const DesignMatrix& design, int replicates, const SimConfig& base,
                      const ClimateBundle& data, int workers);
SweepResult run_sweep(const DesignMatrix& design, int replicates, const SimConfig& base,
                      const ReplicateRunner& runner, int workers);
// Single-threaded loop over the same tasks; reference for the parallel path.
SweepResult run_sweep_serial(const DesignMatrix& design, int replicates, const SimConfig& base,
                             const ReplicateRunner& runner);

// Average ranks, 1-based, ties share the mean of their positions.
std::vector<double> rank_average(std::span<const double> values);

// Partial rank correlation of y with every column of x. `names` label the
// columns in error messages; defaults to "x<j>".
std::vector<double> prcc(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         std::span<const std::string> names = {});

struct PrccEntry {
  std::string param;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};
using PrccReport = std::vector<PrccEntry>;

// Percentile bootstrap over rows. The interval is widened if needed so it
// always contains the full-sample estimate.
PrccReport bootstrap_ci(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int n_boot, Rng& rng,
                        std::span<const std::string> names = {}, int workers = 0);
PrccReport bootstrap_ci_serial(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int n_boot, Rng& rng,
                               std::span<const std::string> names = {});

std::vector<std::string> default_param_names();

void write_design_csv(std::ostream& out, const DesignMatrix& design);
DesignMatrix read_design_csv(std::istream& in, const std::string& source);
// `row,ideo,n_edge,n_traders,risk_tak,seg,true_model,mean_score,replicates_ok,replicates,status`
void write_sweep_header(std::ostream& out);
void write_sweep_row(std::ostream& out, const SweepRow& row);
std::vector<SweepRow> read_sweep_csv(std::istream& in, const std::string& source);
void write_prcc_csv(std::ostream& out, const PrccReport& report);
PrccReport read_prcc_csv(std::istream& in, const std::string& source);

}  // namespace climkt
