#include "climkt/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include <omp.h>

#include "climkt/csv.hpp"
#include "climkt/error.hpp"

namespace climkt {

namespace {

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

int thread_count(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

}  // namespace

DesignMatrix lhs_sample(int n, Rng& rng) {
  if (n < 2) throw ConfigError("Latin hypercube needs at least 2 points, got " + std::to_string(n));
  const auto count = static_cast<std::size_t>(n);
  DesignMatrix d;
  d.unit.resize(count);
  std::vector<std::size_t> perm(count);
  for (std::size_t dim = 0; dim < 5; ++dim) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < count; ++i)
      d.unit[i][dim] = (static_cast<double>(perm[i]) + uniform01(rng)) / static_cast<double>(count);
  }
  d.rows.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& u = d.unit[i];
    ParamSet& p = d.rows[i];
    p.ideo = u[0];
    p.n_edge = round_half_up(100.0 + 100.0 * u[1]);
    p.n_traders = round_half_up(50.0 + 200.0 * u[2]);
    p.risk_tak = u[3];
    p.seg = u[4];
    p.true_model = uniform01(rng) < 0.5 ? ForcingKind::LogCo2 : ForcingKind::Tsi;
  }
  return d;
}

std::array<double, kParamCount> encode(const ParamSet& p) {
  return {p.ideo,
          static_cast<double>(p.n_edge),
          static_cast<double>(p.n_traders),
          p.risk_tak,
          p.seg,
          p.true_model == ForcingKind::LogCo2 ? 1.0 : 0.0};
}

std::vector<std::string> default_param_names() { return {kParamNames.begin(), kParamNames.end()}; }

Eigen::MatrixXd SweepResult::x() const {
  const auto n = std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.excluded; });
  Eigen::MatrixXd m(n, static_cast<Eigen::Index>(kParamCount));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    if (r.excluded) continue;
    const auto e = encode(r.params);
    for (std::size_t j = 0; j < kParamCount; ++j) m(i, static_cast<Eigen::Index>(j)) = e[j];
    ++i;
  }
  return m;
}

Eigen::VectorXd SweepResult::y() const {
  std::vector<double> v;
  for (const auto& r : rows)
    if (!r.excluded) v.push_back(r.mean_score);
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

SimConfig replicate_config(const SimConfig& base, const ParamSet& params, std::size_t row, int replicate) {
  SimConfig c = base;
  c.params = params;
  c.master_seed = derive_seed(base.master_seed, Stream::Replicate, {row, static_cast<std::uint64_t>(replicate)});
  c.record_trades = false;
  return c;
}

SweepRow reduce_row(std::size_t index, const ParamSet& params, std::span<const std::optional<double>> scores) {
  SweepRow row;
  row.index = index;
  row.params = params;
  row.replicates = static_cast<int>(scores.size());
  double sum = 0.0;
  for (const auto& s : scores)
    if (s) {
      sum += *s;
      ++row.replicates_ok;
    }
  if (row.replicates_ok > 0 && row.replicates_ok * 5 >= row.replicates * 4) {
    row.mean_score = sum / row.replicates_ok;
    if (row.replicates_ok < row.replicates)
      row.note = std::to_string(row.replicates - row.replicates_ok) + " replicate(s) failed";
  } else {
    row.excluded = true;
    row.mean_score = std::nan("");
    row.note = "only " + std::to_string(row.replicates_ok) + " of " + std::to_string(row.replicates) +
               " replicates succeeded";
  }
  return row;
}

namespace {

std::optional<double> run_task(const DesignMatrix& design, std::size_t row, int rep, const SimConfig& base,
                               const ReplicateRunner& runner) {
  try {
    return runner(row, rep, replicate_config(base, design.rows[row], row, rep));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::vector<SweepRow> reduce_rows(const DesignMatrix& design, std::size_t first, std::size_t last, int replicates,
                                  const std::vector<std::optional<double>>& scores) {
  std::vector<SweepRow> out;
  const auto reps = static_cast<std::size_t>(replicates);
  for (std::size_t r = first; r < last; ++r)
    out.push_back(reduce_row(r, design.rows[r],
                             std::span<const std::optional<double>>(scores).subspan((r - first) * reps, reps)));
  return out;
}

void check_range(const DesignMatrix& design, std::size_t first, std::size_t last, int replicates) {
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  if (first > last || last > design.n_points()) throw ConfigError("sweep row range outside the design");
}

}  // namespace

std::vector<SweepRow> run_sweep_rows(const DesignMatrix& design, std::size_t first, std::size_t last,
                                     int replicates, const SimConfig& base, const ReplicateRunner& runner,
                                     int workers) {
  check_range(design, first, last, replicates);
  const long tasks = static_cast<long>((last - first) * static_cast<std::size_t>(replicates));
  std::vector<std::optional<double>> scores(static_cast<std::size_t>(tasks));
  // Each task owns its seed and output slot, so the result is independent of scheduling.
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(workers))
  for (long t = 0; t < tasks; ++t) {
    const std::size_t row = first + static_cast<std::size_t>(t / replicates);
    const int rep = static_cast<int>(t % replicates);
    scores[static_cast<std::size_t>(t)] = run_task(design, row, rep, base, runner);
  }
  return reduce_rows(design, first, last, replicates, scores);
}

SweepResult run_sweep(const DesignMatrix& design, int replicates, const SimConfig& base,
                      const ReplicateRunner& runner, int workers) {
  return {run_sweep_rows(design, 0, design.n_points(), replicates, base, runner, workers)};
}

SweepResult run_sweep(const DesignMatrix& design, int replicates, const SimConfig& base,
                      const ClimateBundle& data, int workers) {
  const ReplicateRunner runner = [&data](std::size_t, int, const SimConfig& c) {
    return run_simulation(c, data).convergence_score;
  };
  return run_sweep(design, replicates, base, runner, workers);
}

SweepResult run_sweep_serial(const DesignMatrix& design, int replicates, const SimConfig& base,
                             const ReplicateRunner& runner) {
  check_range(design, 0, design.n_points(), replicates);
  std::vector<std::optional<double>> scores;
  for (std::size_t row = 0; row < design.n_points(); ++row)
    for (int rep = 0; rep < replicates; ++rep) scores.push_back(run_task(design, row, rep, base, runner));
  return {reduce_rows(design, 0, design.n_points(), replicates, scores)};
}

std::vector<double> rank_average(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && values[idx[j]] == values[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t m = i; m < j; ++m) ranks[idx[m]] = avg;
    i = j;
  }
  return ranks;
}

namespace {

std::string column_name(std::span<const std::string> names, Eigen::Index j) {
  return j < static_cast<Eigen::Index>(names.size()) ? names[static_cast<std::size_t>(j)] : "x" + std::to_string(j);
}

Eigen::VectorXd ranked(const Eigen::VectorXd& v) {
  const auto r = rank_average(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
  return Eigen::Map<const Eigen::VectorXd>(r.data(), v.size());
}

}  // namespace

std::vector<double> prcc(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::span<const std::string> names) {
  const Eigen::Index n = x.rows(), p = x.cols();
  if (y.size() != n) throw InputError("PRCC: x and y disagree on the number of rows");
  if (n < 10) throw InputError("PRCC needs at least 10 rows, got " + std::to_string(n));
  if (p < 1) throw InputError("PRCC needs at least one input column");

  Eigen::MatrixXd rx(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    rx.col(j) = ranked(x.col(j));
    if (rx.col(j).maxCoeff() == rx.col(j).minCoeff())
      throw UndefinedPrccError(column_name(names, j), "PRCC undefined: column '" + column_name(names, j) + "' is constant");
  }
  const Eigen::VectorXd ry = ranked(y);
  if (ry.maxCoeff() == ry.minCoeff()) throw UndefinedPrccError("y", "PRCC undefined: output column is constant");

  std::vector<double> out(static_cast<std::size_t>(p));
  Eigen::MatrixXd z(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    // Z = [1, ranks of every other column]
    z.col(0).setOnes();
    for (Eigen::Index c = 0, k = 1; c < p; ++c)
      if (c != j) z.col(k++) = rx.col(c);
    const auto qr = z.colPivHouseholderQr();
    const Eigen::VectorXd ex = rx.col(j) - z * qr.solve(rx.col(j));
    const Eigen::VectorXd ey = ry - z * qr.solve(ry);
    const double sxx = ex.squaredNorm(), syy = ey.squaredNorm();
    const double scale = static_cast<double>(n) * static_cast<double>(n) * 1e-20;
    if (!(sxx > scale) || !(syy > scale))
      throw UndefinedPrccError(column_name(names, j),
                               "PRCC undefined: column '" + column_name(names, j) + "' is collinear with the others");
    out[static_cast<std::size_t>(j)] = std::clamp(ex.dot(ey) / std::sqrt(sxx * syy), -1.0, 1.0);
  }
  return out;
}

namespace {

constexpr int kResampleRetries = 100;

std::vector<double> bootstrap_replicate(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                        std::span<const std::string> names, std::uint64_t base, int b) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd xb(n, x.cols());
  Eigen::VectorXd yb(n);
  for (int attempt = 0; attempt < kResampleRetries; ++attempt) {
    Rng rng(derive_seed(base, {static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(attempt)}));
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto src = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::size_t>(n)));
      xb.row(i) = x.row(src);
      yb(i) = y(src);
    }
    try {
      return prcc(xb, yb, names);
    } catch (const UndefinedPrccError&) {
      // Degenerate resample; redraw.
    }
  }
  throw Error("bootstrap replicate " + std::to_string(b) + " stayed degenerate after " +
              std::to_string(kResampleRetries) + " redraws");
}

// Linear interpolation between order statistics.
double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

PrccReport summarize(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::span<const std::string> names,
                     const std::vector<std::vector<double>>& boots) {
  const auto estimate = prcc(x, y, names);
  PrccReport report;
  for (std::size_t j = 0; j < estimate.size(); ++j) {
    std::vector<double> col(boots.size());
    for (std::size_t b = 0; b < boots.size(); ++b) col[b] = boots[b][j];
    PrccEntry e;
    e.param = column_name(names, static_cast<Eigen::Index>(j));
    e.estimate = estimate[j];
    e.ci_low = std::min(percentile(col, 0.025), e.estimate);
    e.ci_high = std::max(percentile(col, 0.975), e.estimate);
    report.push_back(e);
  }
  return report;
}

void check_boot(int n_boot) {
  if (n_boot < 100) throw ConfigError("n_boot must be at least 100, got " + std::to_string(n_boot));
}

}  // namespace

PrccReport bootstrap_ci(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int n_boot, Rng& rng,
                        std::span<const std::string> names, int workers) {
  check_boot(n_boot);
  prcc(x, y, names);  // surface input errors before spawning threads
  const std::uint64_t base = rng();
  std::vector<std::vector<double>> boots(static_cast<std::size_t>(n_boot));
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(thread_count(workers))
  for (int b = 0; b < n_boot; ++b) {
    try {
      boots[static_cast<std::size_t>(b)] = bootstrap_replicate(x, y, names, base, b);
    } catch (...) {
#pragma omp critical(climkt_bootstrap_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return summarize(x, y, names, boots);
}

PrccReport bootstrap_ci_serial(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int n_boot, Rng& rng,
                               std::span<const std::string> names) {
  check_boot(n_boot);
  prcc(x, y, names);
  const std::uint64_t base = rng();
  std::vector<std::vector<double>> boots;
  for (int b = 0; b < n_boot; ++b) boots.push_back(bootstrap_replicate(x, y, names, base, b));
  return summarize(x, y, names, boots);
}

// ---- CSV ------------------------------------------------------------------

namespace {

const char* kDesignHeader = "row,ideo,n_edge,n_traders,risk_tak,seg,true_model";
const char* kSweepHeader = "row,ideo,n_edge,n_traders,risk_tak,seg,true_model,mean_score,replicates_ok,replicates,status";
const char* kPrccHeader = "param,estimate,ci_low,ci_high";

void write_params(std::ostream& out, const ParamSet& p) {
  out << csv::format_double(p.ideo) << ',' << p.n_edge << ',' << p.n_traders << ',' << csv::format_double(p.risk_tak)
      << ',' << csv::format_double(p.seg) << ',' << to_string(p.true_model);
}

[[noreturn]] void bad_row(const std::string& source, std::size_t line, const std::string& what) {
  throw ParseError(ParseError::Kind::Malformed, source, line, what);
}

double need_double(std::string_view s, const std::string& source, std::size_t line, const char* col) {
  const auto v = csv::parse_double(s);
  if (!v) bad_row(source, line, std::string("bad ") + col + " '" + std::string(s) + "'");
  return *v;
}

long long need_int(std::string_view s, const std::string& source, std::size_t line, const char* col) {
  const auto v = csv::parse_int(s);
  if (!v) bad_row(source, line, std::string("bad ") + col + " '" + std::string(s) + "'");
  return *v;
}

ParamSet read_params(const std::vector<std::string_view>& f, const std::string& source, std::size_t line) {
  ParamSet p;
  p.ideo = need_double(f[1], source, line, "ideo");
  p.n_edge = static_cast<int>(need_int(f[2], source, line, "n_edge"));
  p.n_traders = static_cast<int>(need_int(f[3], source, line, "n_traders"));
  p.risk_tak = need_double(f[4], source, line, "risk_tak");
  p.seg = need_double(f[5], source, line, "seg");
  try {
    p.true_model = parse_forcing(f[6]);
  } catch (const ConfigError&) {
    bad_row(source, line, "bad true_model '" + std::string(f[6]) + "'");
  }
  return p;
}

template <class RowFn>
void read_table(std::istream& in, const std::string& source, const char* header, std::size_t width, RowFn fn) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    if (!have_header) {
      if (csv::trim(line) != header)
        throw ParseError(ParseError::Kind::BadHeader, source, line_no, std::string("expected header '") + header + "'");
      have_header = true;
      continue;
    }
    const auto f = csv::split(line);
    if (f.size() != width)
      bad_row(source, line_no, "expected " + std::to_string(width) + " fields, found " + std::to_string(f.size()));
    fn(f, line_no);
  }
  if (!have_header) throw ParseError(ParseError::Kind::BadHeader, source, 0, "missing header row");
}

}  // namespace

void write_design_csv(std::ostream& out, const DesignMatrix& design) {
  out << kDesignHeader << '\n';
  for (std::size_t i = 0; i < design.rows.size(); ++i) {
    out << i << ',';
    write_params(out, design.rows[i]);
    out << '\n';
  }
}

DesignMatrix read_design_csv(std::istream& in, const std::string& source) {
  DesignMatrix d;
  read_table(in, source, kDesignHeader, 7, [&](const auto& f, std::size_t line) {
    if (need_int(f[0], source, line, "row") != static_cast<long long>(d.rows.size()))
      bad_row(source, line, "rows must be numbered consecutively from 0");
    d.rows.push_back(read_params(f, source, line));
  });
  return d;
}

void write_sweep_header(std::ostream& out) { out << kSweepHeader << '\n'; }

void write_sweep_row(std::ostream& out, const SweepRow& row) {
  out << row.index << ',';
  write_params(out, row.params);
  out << ',' << (row.excluded ? std::string("nan") : csv::format_double(row.mean_score)) << ',' << row.replicates_ok
      << ',' << row.replicates << ',' << (row.excluded ? "excluded" : "ok") << '\n';
}

std::vector<SweepRow> read_sweep_csv(std::istream& in, const std::string& source) {
  std::vector<SweepRow> rows;
  read_table(in, source, kSweepHeader, 11, [&](const auto& f, std::size_t line) {
    SweepRow r;
    r.index = static_cast<std::size_t>(need_int(f[0], source, line, "row"));
    r.params = read_params(f, source, line);
    r.replicates_ok = static_cast<int>(need_int(f[8], source, line, "replicates_ok"));
    r.replicates = static_cast<int>(need_int(f[9], source, line, "replicates"));
    if (f[10] == "ok") {
      r.mean_score = need_double(f[7], source, line, "mean_score");
    } else if (f[10] == "excluded") {
      r.excluded = true;
      r.mean_score = std::nan("");
    } else {
      bad_row(source, line, "status must be ok or excluded");
    }
    rows.push_back(r);
  });
  return rows;
}

void write_prcc_csv(std::ostream& out, const PrccReport& report) {
  out << kPrccHeader << '\n';
  for (const auto& e : report)
    out << e.param << ',' << csv::format_double(e.estimate) << ',' << csv::format_double(e.ci_low) << ','
        << csv::format_double(e.ci_high) << '\n';
}

PrccReport read_prcc_csv(std::istream& in, const std::string& source) {
  PrccReport report;
  read_table(in, source, kPrccHeader, 4, [&](const auto& f, std::size_t line) {
    report.push_back({std::string(f[0]), need_double(f[1], source, line, "estimate"),
                      need_double(f[2], source, line, "ci_low"), need_double(f[3], source, line, "ci_high")});
  });
  return report;
}

}  // namespace climkt
