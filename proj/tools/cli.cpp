#include "cli.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "climkt/error.hpp"
#include "climkt/sensitivity.hpp"
#include "digest.hpp"
#include "settings.hpp"

namespace climkt::cli {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  std::string name;
  std::string config;
  std::string out_dir = ".";
  int workers = 0;
  std::string trade_log;
  std::string edge_list;
  long max_rows = -1;
  bool fresh = false;
  std::string positional_sweep;
  // Flag values by setting key, with the option that carried each.
  std::map<std::string, std::pair<CLI::Option*, std::string>> flags;
};

void add_setting_flags(CLI::App& app, Invocation& inv) {
  for (const auto& key : setting_keys()) {
    std::string names = "--" + key;
    std::string dashed = key;
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    if (dashed != key) names += ",--" + dashed;
    auto& slot = inv.flags[key];
    slot.first = app.add_option(names, slot.second, "configuration key '" + key + "'");
  }
}

Settings resolve(const Invocation& inv) {
  Settings s = default_settings();
  if (!inv.config.empty()) load_config_file(s, inv.config);
  for (const auto& [key, slot] : inv.flags)
    if (slot.first->count() > 0) apply_setting(s, key, slot.second);
  if (!inv.positional_sweep.empty()) s.sweep_input = inv.positional_sweep;
  if (!s.command.empty() && s.command != inv.name)
    throw ConfigError("configuration was written for '" + s.command + "', not '" + inv.name + "'");
  s.command = inv.name;
  for (fs::path* p : {&s.temperature, &s.co2, &s.tsi, &s.sweep_input})
    if (!p->empty()) *p = fs::absolute(*p).lexically_normal();
  return s;
}

std::map<std::string, fs::path> datasets(const Settings& s) {
  if (s.command == "prcc") return {{"sweep", s.sweep_input}};
  return {{"temperature", s.temperature}, {"co2", s.co2}, {"tsi", s.tsi}};
}

// Hashes every input and checks it against digests recorded by an earlier manifest.
std::map<std::string, std::string> verify_datasets(const Settings& s) {
  std::map<std::string, std::string> out;
  for (const auto& [name, path] : datasets(s)) {
    out[name] = sha256_file(path);
    const auto it = s.expected_sha256.find(name);
    if (it != s.expected_sha256.end() && it->second != out[name])
      throw ConfigError("dataset '" + name + "' (" + path.string() +
                        ") differs from the one recorded in the manifest; remove the sha256 line to accept it");
  }
  return out;
}

const std::set<std::string>& manifest_keys(const std::string& command) {
  static const std::set<std::string> prcc = {"seed", "n_boot", "sweep"};
  static const std::set<std::string> sweep_only = {"n_points", "replicates"};
  static const std::set<std::string> params = {"ideo", "n_edge", "n_traders", "risk_tak", "seg", "true_model"};
  static std::map<std::string, std::set<std::string>> cache;
  auto it = cache.find(command);
  if (it != cache.end()) return it->second;
  std::set<std::string> keys;
  for (const auto& k : setting_keys()) {
    if (command == "prcc") {
      if (prcc.count(k)) keys.insert(k);
    } else if (command == "sweep") {
      if (!params.count(k) && k != "n_boot" && k != "sweep") keys.insert(k);
    } else if (!sweep_only.count(k) && k != "n_boot" && k != "sweep") {
      keys.insert(k);
    }
  }
  return cache[command] = keys;
}

std::string manifest_text(const Settings& s, const std::map<std::string, std::string>& digests) {
  std::ostringstream out;
  out << "# climkt " << CLIMKT_VERSION << " run manifest; reproduce with: climkt " << s.command
      << " --config <this file>\n";
  out << "command = " << s.command << '\n';
  out << "version = " << CLIMKT_VERSION << '\n';
  const auto& wanted = manifest_keys(s.command);
  for (const auto& [k, v] : describe(s))
    if (wanted.count(k)) out << k << " = " << v << '\n';
  for (const auto& [name, hex] : digests) out << "sha256." << name << " = " << hex << '\n';
  return out.str();
}

fs::path prepare_out_dir(const Invocation& inv) {
  fs::path dir(inv.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw Error("failed to write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ClimateBundle load_data(const Settings& s) { return load_climate_bundle({s.temperature, s.co2, s.tsi}); }

void report_warnings(const SimResult& r) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_simulate(const Invocation& inv, bool historical) {
  const Settings s = resolve(inv);
  const auto digests = verify_datasets(s);
  const ClimateBundle data = load_data(s);
  const fs::path dir = prepare_out_dir(inv);

  SimConfig c = s.sim;
  c.record_trades = !inv.trade_log.empty();
  c.record_network = !inv.edge_list.empty();
  const SimResult r = historical ? run_historical(c, data) : run_simulation(c, data);
  report_warnings(r);

  std::ostringstream csv;
  write_run_csv(csv, r, c.score);
  const fs::path out = dir / (historical ? "historical.csv" : "run.csv");
  write_file(out, csv.str());
  write_file(dir / "manifest.txt", manifest_text(s, digests));

  if (!inv.trade_log.empty()) {
    std::ostringstream t;
    write_trade_log_csv(t, r.trades);
    write_file(inv.trade_log, t.str());
  }
  if (!inv.edge_list.empty()) {
    Network net(static_cast<std::size_t>(c.params.n_traders));
    for (const auto& [a, b] : r.edges) net.add_edge(a, b);
    std::ostringstream e;
    write_edge_list_csv(e, net);
    write_file(inv.edge_list, e.str());
  }
  std::cout << "wrote " << out.string() << " (" << r.sequences.size() << " sequences, final fraction "
            << r.sequences.back().frac_true << ", score " << r.convergence_score << ")\n";
  return 0;
}

// Rows already in a resumable sweep.csv, after dropping a torn final line.
std::size_t resume_prefix(const fs::path& sweep_path, const DesignMatrix& design) {
  std::string text = read_file(sweep_path);
  const auto last_newline = text.rfind('\n');
  text.resize(last_newline == std::string::npos ? 0 : last_newline + 1);
  if (text.empty()) {
    std::ostringstream h;
    write_sweep_header(h);
    write_file(sweep_path, h.str());
    return 0;
  }
  std::istringstream in(text);
  const auto rows = read_sweep_csv(in, sweep_path.string());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].index != i || i >= design.n_points() || !(rows[i].params == design.rows[i]))
      throw ConfigError(sweep_path.string() + " row " + std::to_string(i) +
                        " does not match the design; pass --fresh to start over");
  }
  write_file(sweep_path, text);
  return rows.size();
}

int cmd_sweep(const Invocation& inv) {
  const Settings s = resolve(inv);
  if (s.n_points < 2) throw ConfigError("n_points must be at least 2");
  if (s.replicates < 1) throw ConfigError("replicates must be at least 1");
  const auto digests = verify_datasets(s);
  const ClimateBundle data = load_data(s);
  const fs::path dir = prepare_out_dir(inv);

  Rng design_rng = make_stream(s.sim.master_seed, Stream::Design);
  const DesignMatrix design = lhs_sample(s.n_points, design_rng);
  SimConfig base = s.sim;
  base.mode = SimMode::Future;
  // Fail fast on configuration problems shared by every row.
  plan_sequences(base, data);

  const std::string manifest = manifest_text(s, digests);
  const fs::path manifest_path = dir / "manifest.txt";
  const fs::path sweep_path = dir / "sweep.csv";
  std::size_t done = 0;
  if (!inv.fresh && fs::exists(sweep_path)) {
    if (!fs::exists(manifest_path) || read_file(manifest_path) != manifest)
      throw ConfigError(sweep_path.string() +
                        " belongs to a different sweep configuration; pass --fresh or choose another --out-dir");
    done = resume_prefix(sweep_path, design);
    if (done > 0) std::cerr << "resuming after " << done << " completed rows\n";
  } else {
    write_file(manifest_path, manifest);
    std::ostringstream d;
    write_design_csv(d, design);
    write_file(dir / "design.csv", d.str());
    std::ostringstream h;
    write_sweep_header(h);
    write_file(sweep_path, h.str());
  }

  const ReplicateRunner runner = [&data](std::size_t, int, const SimConfig& c) {
    return run_simulation(c, data).convergence_score;
  };
  const int threads = inv.workers > 0 ? inv.workers : omp_get_max_threads();
  const std::size_t batch = static_cast<std::size_t>(std::max(4, 2 * threads));
  std::size_t limit = design.n_points();
  if (inv.max_rows >= 0) limit = std::min(limit, done + static_cast<std::size_t>(inv.max_rows));

  std::ofstream out(sweep_path, std::ios::binary | std::ios::app);
  std::size_t excluded = 0;
  while (done < limit) {
    const std::size_t end = std::min(limit, done + batch);
    for (const auto& row : run_sweep_rows(design, done, end, s.replicates, base, runner, inv.workers)) {
      write_sweep_row(out, row);
      if (row.excluded) {
        ++excluded;
        std::cerr << "warning: row " << row.index << " excluded: " << row.note << '\n';
      } else if (!row.note.empty()) {
        std::cerr << "warning: row " << row.index << ": " << row.note << '\n';
      }
    }
    out.flush();
    if (!out) throw Error("failed to append to " + sweep_path.string());
    done = end;
  }
  if (done < design.n_points()) {
    std::cout << "stopped after " << done << " of " << design.n_points() << " rows; rerun to resume\n";
    return 0;
  }
  std::cout << "wrote " << sweep_path.string() << " (" << design.n_points() << " rows, " << excluded
            << " excluded)\n";
  return 0;
}

int cmd_prcc(const Invocation& inv) {
  const Settings s = resolve(inv);
  if (s.sweep_input.empty()) throw ConfigError("prcc needs a sweep.csv (positional argument or --sweep)");
  const auto digests = verify_datasets(s);
  std::ifstream in(s.sweep_input);
  SweepResult sweep{read_sweep_csv(in, s.sweep_input.string())};
  const auto excluded = std::count_if(sweep.rows.begin(), sweep.rows.end(), [](const SweepRow& r) { return r.excluded; });
  if (excluded > 0) std::cerr << "warning: " << excluded << " excluded rows left out of the analysis\n";

  const auto names = default_param_names();
  Rng rng = make_stream(s.sim.master_seed, Stream::Bootstrap);
  const PrccReport report = bootstrap_ci(sweep.x(), sweep.y(), s.n_boot, rng, names, inv.workers);

  const fs::path dir = prepare_out_dir(inv);
  std::ostringstream csv;
  write_prcc_csv(csv, report);
  write_file(dir / "prcc.csv", csv.str());
  write_file(dir / "manifest.txt", manifest_text(s, digests));
  std::cout << "wrote " << (dir / "prcc.csv").string() << " (" << sweep.x().rows() << " rows, " << s.n_boot
            << " bootstrap resamples)\n";
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Agent-based climate prediction market simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CLIMKT_VERSION));

  std::deque<Invocation> invocations;
  auto add = [&](const char* name, const char* help) {
    Invocation& inv = invocations.emplace_back();
    inv.name = name;
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", inv.config, "key = value configuration file (a manifest works too)");
    sub->add_option("--out-dir,--out_dir", inv.out_dir, "output directory")->capture_default_str();
    sub->add_option("--workers", inv.workers, "OpenMP threads for sweeps and bootstrap (0 = all)");
    add_setting_flags(*sub, inv);
    return std::pair{sub, &inv};
  };

  auto [run, run_inv] = add("run", "one simulation of the future scenario");
  run->add_option("--trade-log,--trade_log", run_inv->trade_log, "also write every trade to this CSV");
  run->add_option("--edge-list,--edge_list", run_inv->edge_list, "also write the social network to this CSV");
  auto [hist, hist_inv] = add("historical", "one simulation over the historical temperature record");
  hist->add_option("--trade-log,--trade_log", hist_inv->trade_log, "also write every trade to this CSV");
  hist->add_option("--edge-list,--edge_list", hist_inv->edge_list, "also write the social network to this CSV");
  auto [sweep, sweep_inv] = add("sweep", "Latin hypercube sweep with replicates");
  sweep->add_option("--max-rows,--max_rows", sweep_inv->max_rows, "stop after this many new rows (resume later)");
  sweep->add_flag("--fresh", sweep_inv->fresh, "discard an existing sweep.csv in the output directory");
  auto [prcc, prcc_inv] = add("prcc", "partial rank correlations with bootstrap intervals");
  prcc->add_option("sweep_csv", prcc_inv->positional_sweep, "sweep.csv to analyse");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_simulate(*run_inv, false);
    if (hist->parsed()) return cmd_simulate(*hist_inv, true);
    if (sweep->parsed()) return cmd_sweep(*sweep_inv);
    return cmd_prcc(*prcc_inv);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace climkt::cli
