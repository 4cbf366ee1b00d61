// Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
// if any fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "climkt/bayes_ar1.hpp"
#include "climkt/climate_data.hpp"
#include "climkt/csv.hpp"
#include "climkt/sensitivity.hpp"
#include "climkt/simulation.hpp"
#include "market_fuzz.hpp"
#include "oracles.hpp"
#include "sensitivity_checks.hpp"
#include "test_files.hpp"

using namespace climkt;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

ClimateBundle load_from(const fs::path& dir) {
  return load_climate_bundle({dir / "temperature.csv", dir / "co2_ppm.csv", dir / "tsi_wm2.csv"});
}

const ClimateBundle& fixture_bundle() {
  static const ClimateBundle b = load_from(CLIMKT_DATA_DIR);
  return b;
}

// Median over seeds of frac_true at each sequence end.
std::map<int, double> median_by_end_year(const std::vector<SimResult>& runs) {
  std::map<int, std::vector<double>> by_year;
  for (const auto& r : runs)
    for (const auto& s : r.sequences) by_year[s.end_year].push_back(s.frac_true);
  std::map<int, double> out;
  for (const auto& [year, v] : by_year) out[year] = oracle::median(v);
  return out;
}

Verdict future_convergence() {
  Verdict v{true, ""};
  for (ForcingKind model : {ForcingKind::LogCo2, ForcingKind::Tsi}) {
    std::vector<SimResult> runs;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      SimConfig c;
      c.master_seed = seed;
      c.params.seg = 0.05;
      c.params.true_model = model;
      c.n_sequences = 4;  // sequence ends 2020, 2026, 2032, 2038
      runs.push_back(run_simulation(c, fixture_bundle()));
    }
    const auto med = median_by_end_year(runs);
    int reached = 0;
    for (const auto& [year, m] : med)
      if (m >= 0.75) {
        reached = year;
        break;
      }
    const bool ok = reached != 0 && reached <= 2038;
    v.pass = v.pass && ok;
    v.detail += std::string(to_string(model)) + ":";
    for (const auto& [year, m] : med) v.detail += " " + std::to_string(year) + "=" + fmt(m);
    v.detail += ok ? " (0.75 by " + std::to_string(reached) + ")  " : " (0.75 not reached by 2038)  ";
  }
  return v;
}

Verdict segmentation_slows() {
  std::vector<double> low, high;
  int wins = 0, trials = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    SimConfig c;
    c.master_seed = seed;
    c.n_sequences = 3;
    c.params.seg = 0.05;
    const double a = run_simulation(c, fixture_bundle()).sequences.back().frac_true;
    c.params.seg = 0.95;
    const double b = run_simulation(c, fixture_bundle()).sequences.back().frac_true;
    low.push_back(a);
    high.push_back(b);
    if (a != b) {
      ++trials;
      wins += b < a;
    }
  }
  const double p = oracle::sign_test_p(wins, trials);
  const double m_low = oracle::median(low), m_high = oracle::median(high);
  return {m_high < m_low && p < 0.05, "median seg .05 = " + fmt(m_low) + ", seg .95 = " + fmt(m_high) +
                                          "; lower in " + std::to_string(wins) + "/" + std::to_string(trials) +
                                          " untied pairs, sign test p = " + fmt(p, 4)};
}

Verdict historical_validation() {
  const char* real = std::getenv("CLIMKT_REAL_DATA_DIR");
  const bool fixture_based = real == nullptr || *real == '\0';
  const ClimateBundle data = fixture_based ? fixture_bundle() : load_from(real);
  std::vector<SimResult> runs;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    SimConfig c;
    c.master_seed = seed;
    runs.push_back(run_historical(c, data));
  }
  // frac_true counts CO2 believers in historical mode.
  const auto med = median_by_end_year(runs);
  int near_1970 = med.begin()->first;
  for (const auto& [year, m] : med)
    if (std::abs(year - 1970) < std::abs(near_1970 - 1970)) near_1970 = year;
  const int last = med.rbegin()->first;
  const double early = med.at(near_1970), final = med.at(last);
  std::string detail = fixture_based ? "fixture-based, " : "data from " + std::string(real) + ", ";
  detail += "30 seeds: median CO2 share " + fmt(early) + " at " + std::to_string(near_1970) + ", " + fmt(final) +
            " at " + std::to_string(last) + "; path";
  for (const auto& [year, m] : med) detail += " " + std::to_string(year) + "=" + fmt(m, 2);
  return {early < 0.5 && final > 0.6 && last == 2014, detail};
}

Verdict prcc_signs() {
  SimConfig base;
  base.master_seed = 2015;
  Rng design_rng = make_stream(base.master_seed, Stream::Design);
  const auto design = lhs_sample(100, design_rng);
  const auto sweep = run_sweep(design, 5, base, fixture_bundle(), 0);
  Rng boot_rng = make_stream(base.master_seed, Stream::Bootstrap);
  const auto names = default_param_names();
  const auto report = bootstrap_ci(sweep.x(), sweep.y(), 1000, boot_rng, names, 0);
  const std::map<std::string, int> want = {{"ideo", -1},     {"n_edge", 1}, {"n_traders", -1},
                                           {"risk_tak", 1},  {"seg", -1},   {"true_model", 1}};
  bool ok = true;
  std::string detail;
  for (const auto& e : report) {
    const int sign = want.at(e.param);
    bool good = sign * e.estimate > 0;
    if (e.param == "seg" || e.param == "n_edge") good = good && (e.ci_low > 0 || e.ci_high < 0);
    ok = ok && good;
    detail += e.param + " " + fmt(e.estimate) + " [" + fmt(e.ci_low) + "," + fmt(e.ci_high) + "]" +
              (good ? "" : " WRONG") + "  ";
  }
  return {ok, detail};
}

Verdict inference_recovery() {
  const auto x = oracle::log_co2_like(135);
  int covered = 0, within_3se = 0;
  std::mt19937 gen(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint32_t seed = 1; seed <= 100; ++seed) {
    const double beta = 1.0 + 2.0 * u(gen), rho = 0.2 + 0.5 * u(gen), sigma = 0.05 + 0.1 * u(gen);
    const double alpha = -beta * x.front() + 0.6 * (u(gen) - 0.5);
    const auto y = oracle::ar1_regression(x, alpha, beta, rho, sigma, 40000 + seed);
    const AnnualSeries temps(1880, y), forcing(1880, x);
    Rng rng(seed);
    const auto post = sample_posterior(temps, forcing, ForcingKind::LogCo2, SamplerSettings{}, rng);
    std::vector<double> b;
    for (const auto& d : post.draws) b.push_back(d.beta);
    const double m = oracle::mean(b), sd = std::sqrt(oracle::variance(b));
    covered += std::abs(m - beta) <= 2.0 * sd;
    const auto fit = calibrate_truth(temps, forcing, ForcingKind::LogCo2);
    within_3se += std::abs(fit.beta - beta) <= 3.0 * fit.beta_se;
  }
  return {covered >= 90 && within_3se >= 95, "2-sd posterior interval covers beta " + std::to_string(covered) +
                                                 "/100; calibration within 3 SE " + std::to_string(within_3se) +
                                                 "/100"};
}

Verdict market_invariants() {
  long violations = 0;
  long trades = 0;
  std::string first;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto r = fuzz::run_market_fuzz(seed);
    violations += r.violations();
    trades += static_cast<long>(r.trade_log.size());
    if (first.empty() && r.violations() > 0) first = "seed " + std::to_string(seed) + ": " + r.first_failure;
  }
  return {violations == 0, "200 seeds, " + std::to_string(trades) + " trades, " + std::to_string(violations) +
                               " violations" + (first.empty() ? "" : " (" + first + ")")};
}

Verdict prcc_oracle() {
  double worst = 0.0;
  for (std::uint32_t seed = 1; seed <= 20; ++seed)
    worst = std::max(worst, checks::prcc_oracle_gap(checks::random_instance(seed, 50, 4)));
  std::string lhs;
  for (int n : {2, 17, 500}) {
    Rng rng(static_cast<std::uint64_t>(n));
    const auto problem = checks::lhs_problem(lhs_sample(n, rng));
    if (!problem.empty()) lhs += " n=" + std::to_string(n) + ": " + problem;
  }
  char gap[32];
  std::snprintf(gap, sizeof gap, "%.2e", worst);
  return {worst < 1e-10 && lhs.empty(),
          "max |PRCC - oracle| over 20 instances = " + std::string(gap) +
              (lhs.empty() ? "; LHS stratified at n = 2, 17, 500" : ";" + lhs)};
}

int shell(const std::string& args, const fs::path& log) {
  const std::string cmd = "\"" + std::string(CLIMKT_CLI_PATH) + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  return std::system(cmd.c_str());
}

Verdict determinism() {
  testfs::TempDir dir("acceptance");
  const std::string run = "run --seed 2718 --out-dir ";
  if (shell(run + "\"" + (dir / "a").string() + "\"", dir / "a.log") != 0 ||
      shell(run + "\"" + (dir / "b").string() + "\"", dir / "b.log") != 0)
    return {false, "run failed: " + testfs::read_text(dir / "a.log") + testfs::read_text(dir / "b.log")};
  const bool runs_equal = testfs::read_text(dir / "a" / "run.csv") == testfs::read_text(dir / "b" / "run.csv") &&
                          testfs::read_text(dir / "a" / "manifest.txt") ==
                              testfs::read_text(dir / "b" / "manifest.txt");

  const std::string sweep = "sweep --seed 31 --n-points 12 --replicates 2 --n-sequences 3 --out-dir ";
  const auto whole = dir / "whole", parts = dir / "parts";
  bool sweep_ok = shell(sweep + "\"" + whole.string() + "\"", dir / "w.log") == 0;
  sweep_ok = sweep_ok && shell(sweep + "\"" + parts.string() + "\" --max-rows 5", dir / "p1.log") == 0;
  const int partial_rows = [&] {
    const auto text = testfs::read_text(parts / "sweep.csv");
    return static_cast<int>(std::count(text.begin(), text.end(), '\n')) - 1;
  }();
  sweep_ok = sweep_ok && shell(sweep + "\"" + parts.string() + "\"", dir / "p2.log") == 0;
  const bool sweeps_equal = sweep_ok && partial_rows == 5 &&
                            testfs::read_text(whole / "sweep.csv") == testfs::read_text(parts / "sweep.csv");
  return {runs_equal && sweeps_equal,
          std::string("run --seed twice: ") + (runs_equal ? "byte-identical" : "DIFFERENT") +
              "; sweep stopped at " + std::to_string(partial_rows) + " of 12 rows and resumed: " +
              (sweeps_equal ? "identical to uninterrupted" : "DIFFERENT")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "future-scenario convergence", future_convergence},
      {2, "segmentation slows convergence", segmentation_slows},
      {3, "historical validation", historical_validation},
      {4, "PRCC directional signs", prcc_signs},
      {5, "inference recovery", inference_recovery},
      {6, "market invariants", market_invariants},
      {7, "PRCC oracle equivalence", prcc_oracle},
      {8, "end-to-end determinism", determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !v.pass;
    std::cout << "AC" << c.id << ' ' << (v.pass ? "PASS" : "FAIL") << "  " << c.name << "  (" << fmt(secs, 1)
              << " s)  " << v.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
