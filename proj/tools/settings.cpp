#include "settings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <functional>
#include <string>

#include "climkt/csv.hpp"
#include "climkt/error.hpp"

namespace climkt::cli {
namespace {

namespace fs = std::filesystem;

struct Key {
  const char* name;
  std::function<void(Settings&, std::string_view)> set;
  std::function<std::string(const Settings&)> get;
};

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw ConfigError("bad value for '" + std::string(key) + "': '" + std::string(value) + "' (expected " + expected +
                    ")");
}

int to_int(std::string_view key, std::string_view v) {
  const auto x = csv::parse_int(v);
  if (!x || *x < std::numeric_limits<int>::min() || *x > std::numeric_limits<int>::max())
    bad_value(key, v, "an integer");
  return static_cast<int>(*x);
}

double to_double(std::string_view key, std::string_view v) {
  const auto x = csv::parse_double(v);
  if (!x || !std::isfinite(*x)) bad_value(key, v, "a number");
  return *x;
}

std::uint64_t to_seed(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end) bad_value(key, v, "a non-negative integer");
  return out;
}

ForcingKind to_forcing(std::string_view key, std::string_view v) {
  try {
    return parse_forcing(v);
  } catch (const ConfigError&) {
    bad_value(key, v, "co2 or tsi");
  }
}

std::string str(int v) { return std::to_string(v); }
std::string str(double v) { return csv::format_double(v); }

template <class T>
Key int_key(const char* name, T Settings::*field) {
  return {name, [=](Settings& s, std::string_view v) { s.*field = to_int(name, v); },
          [=](const Settings& s) { return str(s.*field); }};
}

#define SIM_INT(name, member)                                                      \
  Key {                                                                            \
    name, [](Settings& s, std::string_view v) { s.sim.member = to_int(name, v); }, \
        [](const Settings& s) { return str(s.sim.member); }                       \
  }
#define SIM_DOUBLE(name, member)                                                      \
  Key {                                                                               \
    name, [](Settings& s, std::string_view v) { s.sim.member = to_double(name, v); }, \
        [](const Settings& s) { return str(s.sim.member); }                          \
  }

Key path_key(const char* name, fs::path Settings::*field) {
  return {name, [=](Settings& s, std::string_view v) { s.*field = fs::path(std::string(v)); },
          [=](const Settings& s) { return (s.*field).string(); }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      SIM_DOUBLE("ideo", params.ideo),
      SIM_INT("n_edge", params.n_edge),
      SIM_INT("n_traders", params.n_traders),
      SIM_DOUBLE("risk_tak", params.risk_tak),
      SIM_DOUBLE("seg", params.seg),
      {"true_model", [](Settings& s, std::string_view v) { s.sim.params.true_model = to_forcing("true_model", v); },
       [](const Settings& s) { return std::string(to_string(s.sim.params.true_model)); }},
      {"seed", [](Settings& s, std::string_view v) { s.sim.master_seed = to_seed("seed", v); },
       [](const Settings& s) { return std::to_string(s.sim.master_seed); }},
      SIM_INT("seq_length_years", seq_length_years),
      SIM_INT("n_sequences", n_sequences),
      SIM_INT("first_trading_year", first_trading_year),
      SIM_INT("min_history_years", min_history_years),
      SIM_INT("bins", bins),
      SIM_DOUBLE("bin_lo", bin_lo),
      SIM_DOUBLE("bin_hi", bin_hi),
      SIM_INT("sessions_per_year", sessions_per_year),
      SIM_INT("n_draws", inference.n_draws),
      SIM_INT("burn_in", inference.burn_in),
      SIM_INT("thin", inference.thin),
      {"ideology",
       [](Settings& s, std::string_view v) {
         if (v == "resistance")
           s.sim.ideology = IdeologyConvention::Resistance;
         else if (v == "adoption")
           s.sim.ideology = IdeologyConvention::Adoption;
         else
           bad_value("ideology", v, "resistance or adoption");
       },
       [](const Settings& s) {
         return std::string(s.sim.ideology == IdeologyConvention::Resistance ? "resistance" : "adoption");
       }},
      {"score",
       [](Settings& s, std::string_view v) {
         if (v == "time_average")
           s.sim.score = ScoreKind::TimeAverage;
         else if (v == "terminal")
           s.sim.score = ScoreKind::Terminal;
         else
           bad_value("score", v, "time_average or terminal");
       },
       [](const Settings& s) { return std::string(s.sim.score == ScoreKind::TimeAverage ? "time_average" : "terminal"); }},
      {"historical_truth",
       [](Settings& s, std::string_view v) { s.sim.historical_truth = to_forcing("historical_truth", v); },
       [](const Settings& s) { return std::string(to_string(s.sim.historical_truth)); }},
      path_key("temperature", &Settings::temperature),
      path_key("co2", &Settings::co2),
      path_key("tsi", &Settings::tsi),
      int_key("n_points", &Settings::n_points),
      int_key("replicates", &Settings::replicates),
      int_key("n_boot", &Settings::n_boot),
      path_key("sweep", &Settings::sweep_input),
  };
  return table;
}

#undef SIM_INT
#undef SIM_DOUBLE

const Key* find_key(std::string_view name) {
  for (const auto& k : keys())
    if (name == k.name) return &k;
  return nullptr;
}

constexpr std::string_view kDigestPrefix = "sha256.";

}  // namespace

Settings default_settings() {
  Settings s;
  const fs::path data = CLIMKT_DEFAULT_DATA_DIR;
  s.temperature = data / "temperature.csv";
  s.co2 = data / "co2_ppm.csv";
  s.tsi = data / "tsi_wm2.csv";
  return s;
}

std::string normalize_key(std::string_view key) {
  std::string out(key);
  for (char& c : out) c = c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& k : keys()) v.emplace_back(k.name);
    return v;
  }();
  return names;
}

bool is_setting_key(std::string_view key) { return find_key(normalize_key(key)) != nullptr; }

void apply_setting(Settings& s, std::string_view key, std::string_view value) {
  const std::string name = normalize_key(key);
  if (const Key* k = find_key(name)) {
    k->set(s, csv::trim(value));
    return;
  }
  if (name.starts_with(kDigestPrefix)) {
    s.expected_sha256[name.substr(kDigestPrefix.size())] = std::string(csv::trim(value));
    return;
  }
  if (name == "command") {
    s.command = std::string(csv::trim(value));
    return;
  }
  if (name == "version") return;
  throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

void load_config_file(Settings& s, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(ParseError::Kind::MissingFile, path.string(), 0, "cannot open configuration file");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string_view body = csv::trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(ParseError::Kind::Malformed, path.string(), line_no, "expected 'key = value'");
    const std::string key = normalize_key(csv::trim(body.substr(0, eq)));
    const std::string_view value = csv::trim(body.substr(eq + 1));
    try {
      apply_setting(s, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (key == "temperature" || key == "co2" || key == "tsi" || key == "sweep") {
      fs::path p(std::string{value});
      if (p.is_relative()) p = path.parent_path() / p;
      apply_setting(s, key, p.string());
    }
  }
}

std::vector<std::pair<std::string, std::string>> describe(const Settings& s) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : keys()) out.emplace_back(k.name, k.get(s));
  return out;
}

}  // namespace climkt::cli
