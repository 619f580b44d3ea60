#pragma once

// Command-line front end. Exit codes: 0 success, 1 configuration error,
// 2 runtime failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "divsim/config.hpp"
#include "divsim/io.hpp"
#include "divsim/report.hpp"
#include "divsim/sweep.hpp"

namespace divsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

inline const std::vector<std::string> kHeatmapMeasures = {"performance", "comm_density", "steps", "collab_ratio"};

struct RunOutcome {
  std::vector<SweepRecord> records;
  Aggregation aggregation;
  std::string report;
};

/// Runs the configured sweep and writes every enabled output file.
inline RunOutcome execute(const RunConfig& cfg, unsigned threads, std::ostream& log) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec || !fs::is_directory(cfg.out_dir))
    throw std::runtime_error("cannot create output directory '" + cfg.out_dir.string() + "'" +
                             (ec ? ": " + ec.message() : std::string()));

  RunOutcome o;
  const SweepGrid grid = cfg.grid();
  const auto started = std::chrono::steady_clock::now();
  o.records = run_sweep(grid, TeamSpec::from_params(cfg.params, 0.0, 0.0), cfg.params, threads);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  o.aggregation = aggregate_cells(o.records);

  log << "divsim: " << (cfg.preset.empty() ? std::string("custom run") : "preset " + cfg.preset) << ", "
      << grid.ifd_targets.size() << " x " << grid.dfd_targets.size() << " cells x " << cfg.params.replicates
      << " replicates = " << o.records.size() << " records (" << o.aggregation.failures << " failed) in "
      << io::format_real(secs) << " s on " << threads << " thread(s)\n";

  if (cfg.csv) {
    const auto path = cfg.out_dir / "records.csv";
    io::write_csv(o.records, path);
    log << "  wrote " << path.string() << '\n';
  }
  if (cfg.heatmaps) {
    if (o.aggregation.cells.empty()) {
      log << "  no successful cells; heatmaps skipped\n";
    } else {
      for (const auto& m : kHeatmapMeasures) {
        const auto path = cfg.out_dir / ("heatmap_" + m + ".ppm");
        io::emit_heatmap(o.aggregation.cells, m, path);
        log << "  wrote " << path.string() << '\n';
      }
    }
  }
  if (cfg.report) {
    const Analysis a = analyze(o.aggregation, cfg.performance_scale, cfg.regress_on_targets);
    o.report = format_report(a, cfg.preset, cfg.params.seed, o.aggregation.failures, cfg.performance_scale,
                             cfg.regress_on_targets);
    const auto path = cfg.out_dir / "report.txt";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << o.report;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
    log << "  wrote " << path.string() << "\n\n" << o.report;
  }
  return o;
}

inline int run_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"divsim: functional diversity team simulator"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("presets", "List scenario presets");
  auto* run = app.add_subcommand("run", "Run an IFD x DFD sweep");

  std::string preset_name, config_path, out_dir, generation_mode, passing_scheme, regress_on;
  std::uint64_t seed = 0;
  int n_functions = 0, n_agents = 0, n_tasks = 0, replicates = 0, max_steps = 0;
  double omega = 0, theta = 0, tau = 0, delta = 0, performance_scale = 0;
  bool mix_skills = true, report = false, no_heatmaps = false, no_csv = false;
  std::vector<double> ifd_targets, dfd_targets;

  auto* o_preset = run->add_option("--preset", preset_name, "Scenario preset (see `divsim presets`)");
  auto* o_config = run->add_option("--config", config_path, "Flat JSON config file");
  auto* o_seed = run->add_option("--seed", seed, "Master seed");
  auto* o_out = run->add_option("-o,--out", out_dir, "Output directory");
  run->add_flag("--report", report, "Write report.txt with regression and correlation tables");
  run->add_flag("--no-heatmaps", no_heatmaps, "Skip heatmap images");
  run->add_flag("--no-csv", no_csv, "Skip records.csv");
  auto* o_nf = run->add_option("--n_functions", n_functions);
  auto* o_na = run->add_option("--n_agents", n_agents);
  auto* o_nt = run->add_option("--n_tasks", n_tasks);
  auto* o_omega = run->add_option("--omega", omega);
  auto* o_theta = run->add_option("--theta", theta);
  auto* o_tau = run->add_option("--tau", tau, "Similarity threshold as a fraction of omega*sqrt(2)");
  auto* o_mix = run->add_option("--mix_skills", mix_skills);
  auto* o_mode = run->add_option("--generation_mode", generation_mode, "specgen | ifds_distribution | uniform_ifds");
  auto* o_delta = run->add_option("--delta", delta);
  auto* o_scheme = run->add_option("--passing_scheme", passing_scheme, "pass_if_stuck | always_pass");
  auto* o_reps = run->add_option("--replicates", replicates);
  auto* o_steps = run->add_option("--max_steps", max_steps);
  auto* o_ifd = run->add_option("--ifd_targets", ifd_targets, "IFD grid values")->delimiter(',');
  auto* o_dfd = run->add_option("--dfd_targets", dfd_targets, "DFD grid values")->delimiter(',');
  auto* o_regress = run->add_option("--regress_on", regress_on, "achieved | target");
  auto* o_scale = run->add_option("--performance_scale", performance_scale);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (list->parsed()) {
    for (auto n : kPresetNames) out << n << '\n';
    return kExitOk;
  }

  RunConfig cfg;
  try {
    nlohmann::json file = nlohmann::json::object();
    if (o_config->count()) file = read_config_json(config_path);
    if (o_preset->count())
      apply_preset(cfg, preset_name);
    else if (file.contains("preset"))
      apply_preset(cfg, detail::json_get<std::string>(file["preset"], "preset"));
    apply_config_json(cfg, file);

    using J = nlohmann::json;
    auto over = [&](CLI::Option* opt, const char* key, const J& v) {
      if (opt->count()) apply_config_value(cfg, key, v);
    };
    over(o_seed, "seed", J(seed));
    over(o_nf, "n_functions", J(n_functions));
    over(o_na, "n_agents", J(n_agents));
    over(o_nt, "n_tasks", J(n_tasks));
    over(o_omega, "omega", J(omega));
    over(o_theta, "theta", J(theta));
    over(o_tau, "tau", J(tau));
    over(o_mix, "mix_skills", J(mix_skills));
    over(o_mode, "generation_mode", J(generation_mode));
    over(o_delta, "delta", J(delta));
    over(o_scheme, "passing_scheme", J(passing_scheme));
    over(o_reps, "replicates", J(replicates));
    over(o_steps, "max_steps", J(max_steps));
    over(o_ifd, "ifd_targets", J(ifd_targets));
    over(o_dfd, "dfd_targets", J(dfd_targets));
    over(o_regress, "regress_on", J(regress_on));
    over(o_scale, "performance_scale", J(performance_scale));
    if (o_out->count()) cfg.out_dir = out_dir;
    if (report) cfg.report = true;
    if (no_heatmaps) cfg.heatmaps = false;
    if (no_csv) cfg.csv = false;
    cfg.validate();
  } catch (const ConfigError& e) {
    err << "divsim: configuration error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    execute(cfg, threads_from_env(), out);
  } catch (const std::exception& e) {
    err << "divsim: run failed: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace divsim::cli
