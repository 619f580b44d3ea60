#pragma once

// Run configuration: scenario presets and the flat JSON config file.

#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "divsim/core.hpp"
#include "divsim/sweep.hpp"

namespace divsim {

/// Configuration problems (bad preset, malformed file, invalid values).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ModelParams params;
  std::string preset;
  std::filesystem::path out_dir = "divsim-out";
  bool csv = true;
  bool heatmaps = true;
  bool report = false;
  std::optional<std::vector<double>> ifd_targets;
  std::optional<std::vector<double>> dfd_targets;
  bool regress_on_targets = false;  // default: achieved IFD/DFD
  double performance_scale = 100.0;

  SweepGrid grid() const {
    SweepGrid g = default_grid(params);
    if (ifd_targets) g.ifd_targets = *ifd_targets;
    if (dfd_targets) g.dfd_targets = *dfd_targets;
    return g;
  }

  void validate() const {
    try {
      params.validate();
      grid().validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
};

inline constexpr std::array<std::string_view, 7> kPresetNames = {
    "specgen-nocomm", "specgen-stuck", "specgen-always", "specgen-open",
    "diverse-always", "diverse-stuck", "missing-expertise"};

inline std::string preset_list() {
  std::string s;
  for (auto n : kPresetNames) {
    if (!s.empty()) s += ", ";
    s += n;
  }
  return s;
}

/// Applies a named scenario on top of the current parameters.
inline void apply_preset(RunConfig& cfg, std::string_view name) {
  ModelParams& p = cfg.params;
  if (name == "specgen-nocomm") {
    // Below the specialist-generalist distance ratio of 2/3: no hybrid pairs.
    p.generation_mode = GenerationMode::SpecGen;
    p.tau = 0.5;
    p.passing_scheme = PassingScheme::PassIfStuck;
  } else if (name == "specgen-stuck") {
    p.generation_mode = GenerationMode::SpecGen;
    p.tau = 0.8;
    p.passing_scheme = PassingScheme::PassIfStuck;
  } else if (name == "specgen-always") {
    p.generation_mode = GenerationMode::SpecGen;
    p.tau = 0.8;
    p.passing_scheme = PassingScheme::AlwaysPass;
  } else if (name == "specgen-open") {
    p.generation_mode = GenerationMode::SpecGen;
    p.tau = 1.01;
    p.passing_scheme = PassingScheme::PassIfStuck;
  } else if (name == "diverse-always") {
    p.generation_mode = GenerationMode::IfdsDistribution;
    p.passing_scheme = PassingScheme::AlwaysPass;
  } else if (name == "diverse-stuck") {
    p.generation_mode = GenerationMode::IfdsDistribution;
    p.passing_scheme = PassingScheme::PassIfStuck;
  } else if (name == "missing-expertise") {
    p.generation_mode = GenerationMode::IfdsDistribution;
    p.mix_skills = false;
    p.passing_scheme = PassingScheme::AlwaysPass;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'; valid presets: " + preset_list());
  }
  cfg.preset = std::string(name);
}

inline RunConfig preset(std::string_view name) {
  RunConfig cfg;
  apply_preset(cfg, name);
  return cfg;
}

namespace detail {

template <typename T>
T json_get(const nlohmann::json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

}  // namespace detail

/// Applies one flat key. Keys are the parameter names plus the run options.
inline void apply_config_value(RunConfig& cfg, const std::string& key, const nlohmann::json& v) {
  using detail::json_get;
  ModelParams& p = cfg.params;
  try {
    if (key == "n_functions") p.n_functions = json_get<int>(v, key);
    else if (key == "n_agents") p.n_agents = json_get<int>(v, key);
    else if (key == "n_tasks") p.n_tasks = json_get<int>(v, key);
    else if (key == "omega") p.omega = json_get<double>(v, key);
    else if (key == "theta") p.theta = json_get<double>(v, key);
    else if (key == "tau") p.tau = json_get<double>(v, key);
    else if (key == "mix_skills") p.mix_skills = json_get<bool>(v, key);
    else if (key == "generation_mode") p.generation_mode = parse_generation_mode(json_get<std::string>(v, key));
    else if (key == "delta") p.delta = json_get<double>(v, key);
    else if (key == "passing_scheme") p.passing_scheme = parse_passing_scheme(json_get<std::string>(v, key));
    else if (key == "replicates") p.replicates = json_get<int>(v, key);
    else if (key == "max_steps") p.max_steps = json_get<int>(v, key);
    else if (key == "seed") p.seed = json_get<std::uint64_t>(v, key);
    else if (key == "out") cfg.out_dir = json_get<std::string>(v, key);
    else if (key == "csv") cfg.csv = json_get<bool>(v, key);
    else if (key == "heatmaps") cfg.heatmaps = json_get<bool>(v, key);
    else if (key == "report") cfg.report = json_get<bool>(v, key);
    else if (key == "ifd_targets") cfg.ifd_targets = json_get<std::vector<double>>(v, key);
    else if (key == "dfd_targets") cfg.dfd_targets = json_get<std::vector<double>>(v, key);
    else if (key == "performance_scale") cfg.performance_scale = json_get<double>(v, key);
    else if (key == "regress_on") {
      const auto s = json_get<std::string>(v, key);
      if (s != "achieved" && s != "target") throw ConfigError("regress_on must be 'achieved' or 'target'");
      cfg.regress_on_targets = s == "target";
    } else if (key == "preset") {
      // handled by load order, see load_config_file
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

inline nlohmann::json read_config_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed config file '" + path.string() + "': " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file '" + path.string() + "' must hold a flat JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.value().is_object()) throw ConfigError("config key '" + it.key() + "' must not be nested");
  return j;
}

/// Applies every key of a parsed config object except "preset".
inline void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
  for (auto it = j.begin(); it != j.end(); ++it) apply_config_value(cfg, it.key(), it.value());
}

}  // namespace divsim
