#pragma once

// Regression and correlation analysis over cell aggregates, and the
// plain-text report built from it.

#include <array>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "divsim/stats.hpp"
#include "divsim/sweep.hpp"

namespace divsim {

struct Analysis {
  std::optional<stats::RegressionReport> comm_density;
  std::optional<stats::RegressionReport> performance;
  std::optional<stats::Correlation> perf_vs_comm;
  std::string comm_density_error, performance_error, correlation_error;
  int cells = 0;
};

/// One observation per cell: mean outcome regressed on mean achieved (or
/// target) IFD and DFD. Performance is multiplied by performance_scale.
inline Analysis analyze(const Aggregation& agg, double performance_scale = 100.0, bool on_targets = false) {
  Analysis a;
  a.cells = static_cast<int>(agg.cells.size());
  std::vector<double> x_ifd, x_dfd, perf, comm;
  for (const auto& c : agg.cells) {
    x_ifd.push_back(on_targets ? c.target_ifd : c.achieved_ifd.mean);
    x_dfd.push_back(on_targets ? c.target_dfd : c.achieved_dfd.mean);
    perf.push_back(c.performance.mean);
    comm.push_back(c.comm_density.mean);
  }
  std::vector<double> perf_scaled(perf);
  for (double& v : perf_scaled) v *= performance_scale;
  const std::array<std::string, 3> names{"Intercept", "IFD", "DFD"};
  try {
    a.comm_density = stats::ols2(comm, x_ifd, x_dfd, names);
  } catch (const std::exception& e) {
    a.comm_density_error = e.what();
  }
  try {
    a.performance = stats::ols2(perf_scaled, x_ifd, x_dfd, names);
  } catch (const std::exception& e) {
    a.performance_error = e.what();
  }
  try {
    a.perf_vs_comm = stats::pearson(perf, comm);
  } catch (const std::exception& e) {
    a.correlation_error = e.what();
  }
  return a;
}

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string fmt_p(double p) { return p < 0.001 ? "<0.001" : fmt("%.3f", p); }

inline std::string regression_table(const std::string& title, const std::optional<stats::RegressionReport>& r,
                                    const std::string& error) {
  std::string s;
  char line[160];
  std::snprintf(line, sizeof line, "%-24s %12s %10s %13s %10s\n", title.c_str(), "Estimate", "SE", "t-statistic",
                "p-value");
  s += line;
  if (!r) return s + "  unavailable: " + error + "\n";
  for (const auto& c : r->coef) {
    std::snprintf(line, sizeof line, "%-24s %12.4f %10.4f %13.2f %10s\n", c.name.c_str(), c.estimate, c.se, c.t,
                  fmt_p(c.p).c_str());
    s += line;
  }
  std::snprintf(line, sizeof line, "  df = %d   adjusted R^2 = %.2f   F = %.1f   p %s\n", r->df, r->adj_r2, r->f,
                r->f_p < 0.001 ? "< 0.001" : ("= " + fmt("%.3f", r->f_p)).c_str());
  return s + line;
}

}  // namespace detail

inline std::string format_report(const Analysis& a, const std::string& preset, std::uint64_t seed, int failures,
                                 double performance_scale, bool on_targets) {
  std::string s;
  s += "divsim report\n";
  s += "preset: " + (preset.empty() ? std::string("(custom)") : preset) + "   seed: " + std::to_string(seed) +
       "   cells: " + std::to_string(a.cells) + "   failed records: " + std::to_string(failures) + "\n";
  s += std::string("regressors: ") + (on_targets ? "target" : "achieved") +
       " IFD and DFD (cell means); performance scaled by " + detail::fmt("%g", performance_scale) + "\n\n";
  s += detail::regression_table("Communication density", a.comm_density, a.comm_density_error);
  s += "\n";
  s += detail::regression_table("Performance", a.performance, a.performance_error);
  s += "\nPearson correlation, performance vs communication density (cell means)\n";
  if (a.perf_vs_comm) {
    char line[120];
    std::snprintf(line, sizeof line, "  r(%d) = %.3f   p %s\n", a.perf_vs_comm->df, a.perf_vs_comm->r,
                  a.perf_vs_comm->p < 0.001 ? "< 0.001" : ("= " + detail::fmt("%.3f", a.perf_vs_comm->p)).c_str());
    s += line;
  } else {
    s += "  unavailable: " + a.correlation_error + "\n";
  }
  return s;
}

}  // namespace divsim
