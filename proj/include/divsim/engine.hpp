#pragma once

// Discrete-time task processing loop. Each step runs three phases in order:
//   assign: unassigned open tasks go to idle agents at random
//   pass:   holders may hand their task to an idle collaborator
//   work:   every holder subtracts its skill vector from its task
// The run stops when every task is complete or max_steps is reached.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "divsim/core.hpp"
#include "divsim/rng.hpp"

namespace divsim {

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

/// Work the agent could do on the task in a single step.
inline double work_potential(const Agent& agent, const Task& task) {
  double w = 0.0;
  for (std::size_t j = 0; j < task.requirements.size(); ++j)
    if (task.requirements[j] > 0.0) w += std::min(agent.skills[j], task.requirements[j]);
  return w;
}

/// Applies one step of work; returns the number of components completed by it.
inline int apply_work(const Agent& agent, Task& task) {
  int completed = 0;
  for (std::size_t j = 0; j < task.requirements.size(); ++j) {
    double& r = task.requirements[j];
    if (r <= 0.0) continue;
    r = std::max(0.0, r - agent.skills[j]);
    if (r <= kTolerance) {
      r = 0.0;
      ++completed;
    }
  }
  return completed;
}

inline bool is_stuck(const Agent& agent, const Task& task) {
  return !task.complete() && work_potential(agent, task) <= kTolerance;
}

struct SimResult {
  int steps_taken = 0;
  int passes = 0;
  int completed_components = 0;
  int total_components = 0;
  double performance = 0.0;
  double comm_density = 0.0;
  bool all_solved = false;
};

struct SimState {
  Team team;
  std::vector<Task> tasks;
  std::vector<std::size_t> holder;     // task -> agent, kNone if unassigned
  std::vector<std::size_t> held_task;  // agent -> task, kNone if idle
  int step = 0;
  int passes = 0;
  int completed_components = 0;

  SimState(Team t, std::vector<Task> k)
      : team(std::move(t)), tasks(std::move(k)), holder(tasks.size(), kNone), held_task(team.size(), kNone) {
    for (const auto& task : tasks)
      if (task.requirements.size() != team.n_functions())
        throw std::invalid_argument("SimState: task and agent dimensions differ");
  }

  bool idle(std::size_t agent) const { return held_task[agent] == kNone; }
  bool all_solved() const {
    return std::all_of(tasks.begin(), tasks.end(), [](const Task& t) { return t.complete(); });
  }
  double remaining_work() const {
    double w = 0.0;
    for (const auto& t : tasks) w += t.remaining();
    return w;
  }

  void transfer(std::size_t task, std::size_t to) {
    const std::size_t from = holder[task];
    if (from != kNone) held_task[from] = kNone;
    holder[task] = to;
    held_task[to] = task;
  }
};

/// Pairs unassigned open tasks with idle agents, both shuffled.
inline void assign_phase(SimState& s, Rng& rng) {
  std::vector<std::size_t> open, idle;
  for (std::size_t k = 0; k < s.tasks.size(); ++k)
    if (s.holder[k] == kNone && !s.tasks[k].complete()) open.push_back(k);
  for (std::size_t i = 0; i < s.team.size(); ++i)
    if (s.idle(i)) idle.push_back(i);
  if (open.empty() || idle.empty()) return;
  rng.shuffle(std::span<std::size_t>(open));
  rng.shuffle(std::span<std::size_t>(idle));
  for (std::size_t n = 0; n < std::min(open.size(), idle.size()); ++n) s.transfer(open[n], idle[n]);
}

/// One round of task passing. Holders act in random order; recipients must
/// be idle collaborators. Returns the number of transfers.
inline int pass_phase(SimState& s, PassingScheme scheme, const CollaborationGraph& graph, Rng& rng) {
  std::vector<std::size_t> holders;
  for (std::size_t i = 0; i < s.team.size(); ++i)
    if (!s.idle(i)) holders.push_back(i);
  rng.shuffle(std::span<std::size_t>(holders));

  int passes = 0;
  for (std::size_t h : holders) {
    const std::size_t k = s.held_task[h];
    if (k == kNone) continue;  // passed its task away earlier in this phase
    const Task& task = s.tasks[k];
    const double own = work_potential(s.team.agents[h], task);
    if (scheme == PassingScheme::PassIfStuck && !is_stuck(s.team.agents[h], task)) continue;

    std::size_t best = kNone;
    double best_w = -1.0;
    for (std::size_t c = 0; c < s.team.size(); ++c) {
      if (c == h || !s.idle(c) || !graph.connected(h, c)) continue;
      const double w = work_potential(s.team.agents[c], task);
      if (w > best_w) {  // strict: ties keep the lowest id
        best_w = w;
        best = c;
      }
    }
    if (best == kNone) continue;
    const double bar = scheme == PassingScheme::PassIfStuck ? 0.0 : own;
    if (best_w > bar + kTolerance) {
      s.transfer(k, best);
      ++passes;
    }
  }
  s.passes += passes;
  return passes;
}

/// Every holder works its task; completed tasks free their agents.
inline void work_phase(SimState& s) {
  for (std::size_t k = 0; k < s.tasks.size(); ++k) {
    const std::size_t a = s.holder[k];
    if (a == kNone) continue;
    s.completed_components += apply_work(s.team.agents[a], s.tasks[k]);
    if (s.tasks[k].complete()) {
      s.held_task[a] = kNone;
      s.holder[k] = kNone;
    }
  }
}

inline SimResult summarize(const SimState& s) {
  SimResult r;
  r.steps_taken = s.step;
  r.passes = s.passes;
  for (const auto& t : s.tasks) {
    r.total_components += t.initial_components;
    r.completed_components += t.completed_components();
  }
  r.performance = r.total_components > 0
                      ? static_cast<double>(r.completed_components) / r.total_components
                      : 1.0;
  r.comm_density = s.step > 0 ? static_cast<double>(s.passes) / s.step : 0.0;
  r.all_solved = s.all_solved();
  return r;
}

inline SimResult run_simulation(const Team& team, std::vector<Task> tasks, const ModelParams& params, Rng& rng) {
  if (team.empty()) throw std::invalid_argument("run_simulation: empty team");
  const CollaborationGraph graph = collaboration_graph(team, params);
  SimState s(team, std::move(tasks));
  while (s.step < params.max_steps && !s.all_solved()) {
    assign_phase(s, rng);
    pass_phase(s, params.passing_scheme, graph, rng);
    work_phase(s);
    ++s.step;
  }
  return summarize(s);
}

}  // namespace divsim
