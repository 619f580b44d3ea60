#pragma once

// IFD x DFD grid scan with replicates, and per-cell aggregation.
//
// Seeding: every record draws from two streams.
//   team stream  derive_seed(master, {1, ifd_index, dfd_index, replicate})
//   world stream derive_seed(master, {2, replicate})
// The world stream (tasks, assignment, pass order) is shared by all cells of
// the same replicate, so cells differ only by their team. Seeds depend on
// grid position alone, which makes parallel and serial runs identical.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "divsim/core.hpp"
#include "divsim/engine.hpp"
#include "divsim/rng.hpp"
#include "divsim/teamgen.hpp"

namespace divsim {

struct SweepGrid {
  std::vector<double> ifd_targets;
  std::vector<double> dfd_targets;

  std::size_t cell_count() const { return ifd_targets.size() * dfd_targets.size(); }

  void validate() const {
    auto check = [](const std::vector<double>& v, const char* name) {
      if (v.empty()) throw std::invalid_argument(std::string("SweepGrid: ") + name + " is empty");
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] >= 0.0 && v[i] <= 1.0))
          throw std::invalid_argument(std::string("SweepGrid: ") + name + " value outside [0,1]");
        if (i > 0 && !(v[i] > v[i - 1]))
          throw std::invalid_argument(std::string("SweepGrid: ") + name + " must be strictly increasing");
      }
    };
    check(ifd_targets, "ifd_targets");
    check(dfd_targets, "dfd_targets");
  }
};

/// Every DFD value reachable by some assignment of n_agents to n_functions
/// dominant functions, ascending.
inline std::vector<double> achievable_dfd_values(int n_agents, int n_functions) {
  if (n_agents < 1 || n_functions < 2) return {0.0};
  const auto n = static_cast<std::size_t>(n_agents);
  const std::size_t smax = n * n;
  // reach[m][s]: m agents placed so far with sum of squared counts s.
  std::vector<std::vector<char>> reach(n + 1, std::vector<char>(smax + 1, 0));
  reach[0][0] = 1;
  for (int f = 0; f < n_functions; ++f) {
    std::vector<std::vector<char>> next(n + 1, std::vector<char>(smax + 1, 0));
    for (std::size_t m = 0; m <= n; ++m)
      for (std::size_t s = 0; s <= smax; ++s) {
        if (!reach[m][s]) continue;
        for (std::size_t c = 0; m + c <= n && s + c * c <= smax; ++c) next[m + c][s + c * c] = 1;
      }
    reach = std::move(next);
  }
  std::vector<double> out;
  for (std::size_t s = smax + 1; s-- > 0;)
    if (reach[n][s])
      out.push_back((1.0 - static_cast<double>(s) / static_cast<double>(smax)) / (1.0 - 1.0 / n_functions));
  return out;
}

/// `count` achievable DFD values spread evenly between 0 and the maximum.
inline std::vector<double> representative_dfd_targets(int n_agents, int n_functions, std::size_t count) {
  const auto all = achievable_dfd_values(n_agents, n_functions);
  if (count == 0) return {};
  if (all.size() <= count || count == 1) {
    return count == 1 ? std::vector<double>{all.front()} : all;
  }
  std::vector<double> out;
  std::size_t from = 0;
  for (std::size_t q = 0; q < count; ++q) {
    const double want = all.back() * static_cast<double>(q) / static_cast<double>(count - 1);
    // Leave enough values for the remaining picks.
    const std::size_t last = all.size() - (count - q);
    std::size_t best = from;
    for (std::size_t i = from; i <= last; ++i)
      if (std::abs(all[i] - want) < std::abs(all[best] - want)) best = i;
    out.push_back(std::min(1.0, all[best]));
    from = best + 1;
  }
  return out;
}

/// 21 IFD targets (0, 0.05, ..., 1) by 11 representative achievable DFDs.
inline SweepGrid default_grid(const ModelParams& params) {
  SweepGrid g;
  for (int i = 0; i <= 20; ++i) g.ifd_targets.push_back(i / 20.0);
  g.dfd_targets = representative_dfd_targets(params.n_agents, params.n_functions, 11);
  return g;
}

struct SweepRecord {
  double target_ifd = 0.0;
  double target_dfd = 0.0;
  int replicate = 0;
  std::uint64_t seed = 0;  // team-stream seed
  double achieved_ifd = 0.0;
  double achieved_dfd = 0.0;
  double achieved_sdi = 0.0;
  int steps = 0;
  int passes = 0;
  int completed_components = 0;
  int total_components = 0;
  double performance = 0.0;
  double comm_density = 0.0;
  double collab_ratio = 0.0;
  bool failed = false;
};

inline std::uint64_t team_seed(std::uint64_t master, std::size_t ifd_index, std::size_t dfd_index, int replicate) {
  return derive_seed(master, {1, ifd_index, dfd_index, static_cast<std::uint64_t>(replicate)});
}

inline std::uint64_t world_seed(std::uint64_t master, int replicate) {
  return derive_seed(master, {2, static_cast<std::uint64_t>(replicate)});
}

/// Worker count from DIVSIM_THREADS; unset or invalid means one per core.
inline unsigned threads_from_env() {
  if (const char* v = std::getenv("DIVSIM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end != v && *end == '\0' && n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs a single (cell, replicate) unit.
inline SweepRecord run_cell(const SweepGrid& grid, std::size_t ifd_index, std::size_t dfd_index, int replicate,
                            const TeamSpec& spec_template, const ModelParams& params) {
  SweepRecord rec;
  rec.target_ifd = grid.ifd_targets.at(ifd_index);
  rec.target_dfd = grid.dfd_targets.at(dfd_index);
  rec.replicate = replicate;
  rec.seed = team_seed(params.seed, ifd_index, dfd_index, replicate);

  TeamSpec spec = spec_template;
  spec.target_ifd = rec.target_ifd;
  spec.target_dfd = rec.target_dfd;
  Team team;
  try {
    Rng team_rng(rec.seed);
    team = generate_team(spec, params, team_rng);
  } catch (const std::exception&) {
    rec.failed = true;
    return rec;
  }

  rec.achieved_ifd = ifd(team);
  rec.achieved_dfd = dfd(team);
  rec.achieved_sdi = sdi(team);
  rec.collab_ratio = collaboration_graph(team, params).density();

  Rng world(world_seed(params.seed, replicate));
  auto tasks = generate_tasks(params, world);
  const SimResult res = run_simulation(team, std::move(tasks), params, world);
  rec.steps = res.steps_taken;
  rec.passes = res.passes;
  rec.completed_components = res.completed_components;
  rec.total_components = res.total_components;
  rec.performance = res.performance;
  rec.comm_density = res.comm_density;
  return rec;
}

/// Records in row-major order (ifd index, dfd index, replicate).
inline std::vector<SweepRecord> run_sweep(const SweepGrid& grid, const TeamSpec& spec_template,
                                          const ModelParams& params, unsigned threads = 1) {
  grid.validate();
  params.validate();
  const std::size_t nd = grid.dfd_targets.size();
  const auto reps = static_cast<std::size_t>(params.replicates);
  const std::size_t total = grid.cell_count() * reps;
  std::vector<SweepRecord> out(total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t u = next++; u < total; u = next++) {
      try {
        const std::size_t rep = u % reps, cell = u / reps;
        out[u] = run_cell(grid, cell / nd, cell % nd, static_cast<int>(rep), spec_template, params);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single value
};

inline Summary summarize(const std::vector<double>& v) {
  Summary s;
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

struct CellAggregate {
  double target_ifd = 0.0;
  double target_dfd = 0.0;
  int n = 0;
  Summary performance, comm_density, steps, passes, collab_ratio;
  Summary achieved_ifd, achieved_dfd, achieved_sdi;

  /// Mean of a named measure; throws on unknown names.
  double mean_of(const std::string& measure) const {
    if (measure == "performance") return performance.mean;
    if (measure == "comm_density") return comm_density.mean;
    if (measure == "steps") return steps.mean;
    if (measure == "passes") return passes.mean;
    if (measure == "collab_ratio") return collab_ratio.mean;
    if (measure == "sdi") return achieved_sdi.mean;
    throw std::invalid_argument("unknown measure '" + measure + "'");
  }
};

struct Aggregation {
  std::vector<CellAggregate> cells;  // in order of first appearance
  int failures = 0;
};

inline Aggregation aggregate_cells(const std::vector<SweepRecord>& records) {
  Aggregation agg;
  std::vector<std::pair<double, double>> order;
  std::map<std::pair<double, double>, std::vector<const SweepRecord*>> groups;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.target_ifd, r.target_dfd);
    if (r.failed) {
      ++agg.failures;
      continue;
    }
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  for (const auto& key : order) {
    const auto& rows = groups[key];
    auto collect = [&rows](auto field) {
      std::vector<double> v;
      v.reserve(rows.size());
      for (const auto* r : rows) v.push_back(static_cast<double>(field(*r)));
      return summarize(v);
    };
    CellAggregate c;
    c.target_ifd = key.first;
    c.target_dfd = key.second;
    c.n = static_cast<int>(rows.size());
    c.performance = collect([](const SweepRecord& r) { return r.performance; });
    c.comm_density = collect([](const SweepRecord& r) { return r.comm_density; });
    c.steps = collect([](const SweepRecord& r) { return r.steps; });
    c.passes = collect([](const SweepRecord& r) { return r.passes; });
    c.collab_ratio = collect([](const SweepRecord& r) { return r.collab_ratio; });
    c.achieved_ifd = collect([](const SweepRecord& r) { return r.achieved_ifd; });
    c.achieved_dfd = collect([](const SweepRecord& r) { return r.achieved_dfd; });
    c.achieved_sdi = collect([](const SweepRecord& r) { return r.achieved_sdi; });
    agg.cells.push_back(c);
  }
  return agg;
}

}  // namespace divsim
