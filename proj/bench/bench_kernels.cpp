// Times the parallel kernels against their serial references and checks that
// both give the same answer. Usage: bench_kernels [threads]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>

#include <omp.h>

#include "climkt/bayes_ar1.hpp"
#include "climkt/climate_data.hpp"
#include "climkt/sensitivity.hpp"
#include "climkt/simulation.hpp"

using namespace climkt;

namespace {

double seconds(const std::function<void()>& f, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / reps;
}

void report(const char* name, double fast, double ref, bool same) {
  std::printf("%-28s %10.4f s %10.4f s %7.2fx  %s\n", name, fast, ref, ref / fast, same ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
  const std::filesystem::path dir = CLIMKT_DATA_DIR;
  const auto data = load_climate_bundle({dir / "temperature.csv", dir / "co2_ppm.csv", dir / "tsi_wm2.csv"});
  std::printf("threads %d\n%-28s %12s %12s %8s\n", threads, "kernel", "fast", "reference", "speedup");

  {
    PosteriorDraws a, b;
    SamplerSettings s;
    const double fast = seconds([&] {
      Rng rng(1);
      a = sample_posterior(data.temperature, data.log_co2, ForcingKind::LogCo2, s, rng);
    }, 5);
    const double ref = seconds([&] {
      Rng rng(1);
      b = sample_posterior_reference(data.temperature, data.log_co2, ForcingKind::LogCo2, s, rng);
    }, 5);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.draws.size(); ++i) worst = std::max(worst, std::abs(a.draws[i].beta - b.draws[i].beta));
    report("gibbs (moments vs loop)", fast, ref, worst < 1e-8);
  }

  {
    Rng rng(2);
    const auto design = lhs_sample(16, rng);
    SimConfig base;
    base.n_sequences = 2;
    base.inference.n_draws = 500;
    base.inference.burn_in = 100;
    const ReplicateRunner runner = [&data](std::size_t, int, const SimConfig& c) {
      return run_simulation(c, data).convergence_score;
    };
    SweepResult a, b;
    const double fast = seconds([&] { a = run_sweep(design, 2, base, runner, threads); }, 1);
    const double ref = seconds([&] { b = run_sweep_serial(design, 2, base, runner); }, 1);
    bool same = a.rows.size() == b.rows.size();
    for (std::size_t i = 0; same && i < a.rows.size(); ++i) same = a.rows[i].mean_score == b.rows[i].mean_score;
    report("sweep (16 rows x 2)", fast, ref, same);
  }

  {
    Rng rng(3);
    Eigen::MatrixXd x(500, 6);
    Eigen::VectorXd y(500);
    for (int i = 0; i < 500; ++i) {
      for (int j = 0; j < 6; ++j) x(i, j) = uniform01(rng);
      y(i) = x(i, 0) - x(i, 4) + uniform01(rng);
    }
    PrccReport a, b;
    const double fast = seconds([&] {
      Rng r(4);
      a = bootstrap_ci(x, y, 1000, r, {}, threads);
    }, 1);
    const double ref = seconds([&] {
      Rng r(4);
      b = bootstrap_ci_serial(x, y, 1000, r);
    }, 1);
    bool same = true;
    for (std::size_t j = 0; j < a.size(); ++j) same = same && a[j].ci_low == b[j].ci_low && a[j].ci_high == b[j].ci_high;
    report("bootstrap (500 x 6, 1000)", fast, ref, same);
  }
  return 0;
}
