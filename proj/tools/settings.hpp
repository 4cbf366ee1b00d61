#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "climkt/simulation.hpp"

namespace climkt::cli {

struct Settings {
  SimConfig sim;
  std::filesystem::path temperature;
  std::filesystem::path co2;
  std::filesystem::path tsi;
  // sweep
  int n_points = 100;
  int replicates = 10;
  // prcc
  int n_boot = 1000;
  std::filesystem::path sweep_input;
  // Digests recorded by an earlier manifest, keyed by dataset name.
  std::map<std::string, std::string> expected_sha256;
  std::string command;
};

// Defaults, with datasets pointing at the bundled fixtures.
Settings default_settings();

// Lower-cases and turns hyphens into underscores, so `n-edge` and `n_edge` name the same key.
std::string normalize_key(std::string_view key);

// Every configuration key, in manifest order.
const std::vector<std::string>& setting_keys();

bool is_setting_key(std::string_view key);

// Throws ConfigError for unknown keys and unparseable values.
void apply_setting(Settings& s, std::string_view key, std::string_view value);

// `key = value` lines; `#` starts a comment. Relative dataset paths are taken
// relative to the file's directory.
void load_config_file(Settings& s, const std::filesystem::path& path);

// Resolved value of every key, in manifest order.
std::vector<std::pair<std::string, std::string>> describe(const Settings& s);

}  // namespace climkt::cli
