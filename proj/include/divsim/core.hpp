#pragma once

// Domain types and the diversity metrics of a management team:
// individual functional diversity score (IFDS), intrapersonal functional
// diversity (IFD), dominant function diversity (DFD), skill diversity
// index (SDI), inter-agent distance and the collaboration graph.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "divsim/rng.hpp"

namespace divsim {

/// Absolute tolerance for "equals the normalization constant" and for
/// treating remaining work as zero.
inline constexpr double kTolerance = 1e-9;

enum class GenerationMode { SpecGen, IfdsDistribution, UniformIfds };
enum class PassingScheme { PassIfStuck, AlwaysPass };

inline std::string_view to_string(GenerationMode m) {
  switch (m) {
    case GenerationMode::SpecGen: return "specgen";
    case GenerationMode::IfdsDistribution: return "ifds_distribution";
    case GenerationMode::UniformIfds: return "uniform_ifds";
  }
  return "?";
}

inline std::string_view to_string(PassingScheme s) {
  switch (s) {
    case PassingScheme::PassIfStuck: return "pass_if_stuck";
    case PassingScheme::AlwaysPass: return "always_pass";
  }
  return "?";
}

inline GenerationMode parse_generation_mode(std::string_view s) {
  if (s == "specgen") return GenerationMode::SpecGen;
  if (s == "ifds_distribution") return GenerationMode::IfdsDistribution;
  if (s == "uniform_ifds") return GenerationMode::UniformIfds;
  throw std::invalid_argument("unknown generation_mode '" + std::string(s) +
                              "' (expected specgen, ifds_distribution or uniform_ifds)");
}

inline PassingScheme parse_passing_scheme(std::string_view s) {
  if (s == "pass_if_stuck") return PassingScheme::PassIfStuck;
  if (s == "always_pass") return PassingScheme::AlwaysPass;
  throw std::invalid_argument("unknown passing_scheme '" + std::string(s) +
                              "' (expected pass_if_stuck or always_pass)");
}

/// Model parameters with their standard defaults.
struct ModelParams {
  int n_functions = 9;
  int n_agents = 10;
  int n_tasks = 7;
  double omega = 10.0;  // total skill strength of one agent
  double theta = 10.0;  // total work of one task
  double tau = 0.8;     // similarity threshold, fraction of omega * sqrt(2)
  bool mix_skills = true;
  GenerationMode generation_mode = GenerationMode::IfdsDistribution;
  double delta = 5.0;  // width of the per-agent IFDS distribution
  PassingScheme passing_scheme = PassingScheme::PassIfStuck;
  int replicates = 10;
  int max_steps = 250;
  std::uint64_t seed = 0x5EED;

  void validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("ModelParams: " + what); };
    if (n_functions < 1) fail("n_functions must be >= 1");
    if (n_agents < 1) fail("n_agents must be >= 1");
    if (n_tasks < 1) fail("n_tasks must be >= 1");
    if (replicates < 1) fail("replicates must be >= 1");
    if (max_steps < 1) fail("max_steps must be >= 1");
    if (!(omega > 0.0) || !std::isfinite(omega)) fail("omega must be > 0");
    if (!(theta > 0.0) || !std::isfinite(theta)) fail("theta must be > 0");
    if (!(tau >= 0.0) || !std::isfinite(tau)) fail("tau must be >= 0");
    if (!(delta >= 1.0) || delta > n_agents / 2.0)
      fail("delta must lie in [1, n_agents/2]");
  }

  /// Largest distance between two agents whose skills sum to omega.
  double max_distance() const { return omega * std::sqrt(2.0); }
};

struct Agent {
  std::size_t id = 0;
  std::vector<double> skills;
  std::size_t dominant_function = 0;

  std::size_t n_functions() const { return skills.size(); }
  double total() const { return std::accumulate(skills.begin(), skills.end(), 0.0); }
};

/// Builds an agent, resolving the dominant function. Skills within
/// kTolerance of the maximum are tied; ties are broken uniformly at random.
inline Agent make_agent(std::size_t id, std::vector<double> skills, Rng& rng) {
  if (skills.empty()) throw std::invalid_argument("make_agent: empty skill vector");
  for (double s : skills)
    if (!(s >= 0.0) || !std::isfinite(s))
      throw std::invalid_argument("make_agent: skills must be finite and non-negative");
  const double top = *std::max_element(skills.begin(), skills.end());
  std::vector<std::size_t> ties;
  for (std::size_t j = 0; j < skills.size(); ++j)
    if (skills[j] >= top - kTolerance) ties.push_back(j);
  const std::size_t dominant = ties.size() == 1 ? ties.front() : ties[rng.uniform_index(ties.size())];
  return Agent{id, std::move(skills), dominant};
}

/// Checks the agent invariants against a normalization constant.
inline void validate_agent(const Agent& a, std::size_t n_functions, double omega) {
  if (a.skills.size() != n_functions)
    throw std::invalid_argument("agent " + std::to_string(a.id) + ": wrong skill vector length");
  if (std::abs(a.total() - omega) > kTolerance)
    throw std::invalid_argument("agent " + std::to_string(a.id) + ": skills do not sum to omega");
  if (a.dominant_function >= a.skills.size())
    throw std::invalid_argument("agent " + std::to_string(a.id) + ": dominant function out of range");
  for (double s : a.skills)
    if (s > a.skills[a.dominant_function] + kTolerance)
      throw std::invalid_argument("agent " + std::to_string(a.id) + ": dominant function is not maximal");
}

struct Task {
  std::size_t id = 0;
  std::vector<double> requirements;  // remaining work per function
  int initial_components = 0;

  Task() = default;
  Task(std::size_t id_, std::vector<double> req) : id(id_), requirements(std::move(req)) {
    initial_components = static_cast<int>(
        std::count_if(requirements.begin(), requirements.end(), [](double r) { return r > 0.0; }));
  }

  double remaining() const { return std::accumulate(requirements.begin(), requirements.end(), 0.0); }
  bool complete() const {
    return std::all_of(requirements.begin(), requirements.end(), [](double r) { return r <= 0.0; });
  }
  int completed_components() const {
    return initial_components -
           static_cast<int>(std::count_if(requirements.begin(), requirements.end(),
                                          [](double r) { return r > 0.0; }));
  }
};

struct Team {
  std::vector<Agent> agents;

  Team() = default;
  explicit Team(std::vector<Agent> a) : agents(std::move(a)) {
    for (const auto& ag : agents)
      if (ag.skills.size() != agents.front().skills.size())
        throw std::invalid_argument("Team: agents have different skill vector lengths");
  }

  std::size_t size() const { return agents.size(); }
  bool empty() const { return agents.empty(); }
  std::size_t n_functions() const { return agents.empty() ? 0 : agents.front().skills.size(); }
};

namespace detail {

// 1 - sum(p^2), rescaled by 1 - 1/n to [0, 1].
inline double normalized_blau(const std::vector<double>& proportions) {
  const double n = static_cast<double>(proportions.size());
  if (proportions.size() < 2) throw std::invalid_argument("diversity index needs at least 2 functions");
  double sq = 0.0;
  for (double p : proportions) sq += p * p;
  return std::clamp((1.0 - sq) / (1.0 - 1.0 / n), 0.0, 1.0);
}

}  // namespace detail

/// Individual functional diversity score of one agent, computed on skill
/// proportions so the result is in [0, 1] for any normalization constant.
inline double ifds(const Agent& agent) {
  if (agent.n_functions() < 2) throw std::invalid_argument("ifds: needs at least 2 functions");
  const double total = agent.total();
  if (!(total > 0.0)) throw std::invalid_argument("ifds: agent has no skill mass");
  std::vector<double> q(agent.skills.size());
  std::transform(agent.skills.begin(), agent.skills.end(), q.begin(), [total](double s) { return s / total; });
  return detail::normalized_blau(q);
}

inline double ifd(const Team& team) {
  if (team.empty()) throw std::invalid_argument("ifd: empty team");
  double sum = 0.0;
  for (const auto& a : team.agents) sum += ifds(a);
  return sum / static_cast<double>(team.size());
}

/// DFD from a vector of per-function dominant counts.
inline double dfd_from_counts(const std::vector<int>& counts) {
  const double n = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (!(n > 0.0)) throw std::invalid_argument("dfd: empty team");
  std::vector<double> p(counts.size());
  std::transform(counts.begin(), counts.end(), p.begin(), [n](int c) { return c / n; });
  return detail::normalized_blau(p);
}

inline std::vector<int> dominant_counts(const Team& team) {
  std::vector<int> counts(team.n_functions(), 0);
  for (const auto& a : team.agents) ++counts.at(a.dominant_function);
  return counts;
}

inline double dfd(const Team& team) {
  if (team.empty()) throw std::invalid_argument("dfd: empty team");
  return dfd_from_counts(dominant_counts(team));
}

/// Skill diversity index: Blau index over the team's aggregate skill mass.
inline double sdi(const Team& team) {
  if (team.empty()) throw std::invalid_argument("sdi: empty team");
  std::vector<double> mass(team.n_functions(), 0.0);
  for (const auto& a : team.agents)
    for (std::size_t j = 0; j < mass.size(); ++j) mass[j] += a.skills[j];
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("sdi: team has no skill mass");
  for (double& m : mass) m /= total;
  return detail::normalized_blau(mass);
}

/// Euclidean distance between raw skill vectors.
inline double agent_distance(const Agent& a, const Agent& b) {
  if (a.skills.size() != b.skills.size())
    throw std::invalid_argument("agent_distance: skill vectors differ in length");
  double sq = 0.0;
  for (std::size_t j = 0; j < a.skills.size(); ++j) {
    const double d = a.skills[j] - b.skills[j];
    sq += d * d;
  }
  return std::sqrt(sq);
}

/// Symmetric, irreflexive "may exchange tasks" relation.
class CollaborationGraph {
 public:
  CollaborationGraph() = default;
  explicit CollaborationGraph(std::size_t n) : n_(n), adj_(n * n, 0) {}

  std::size_t size() const { return n_; }
  bool connected(std::size_t m, std::size_t n) const { return adj_[m * n_ + n] != 0; }

  void connect(std::size_t m, std::size_t n) {
    if (m == n) return;
    adj_[m * n_ + n] = 1;
    adj_[n * n_ + m] = 1;
  }

  std::size_t edge_count() const {
    return static_cast<std::size_t>(std::count(adj_.begin(), adj_.end(), 1)) / 2;
  }

  /// Connected pairs relative to all unordered pairs; 0 for a single agent.
  double density() const {
    if (n_ < 2) return 0.0;
    return static_cast<double>(edge_count()) / (static_cast<double>(n_) * (n_ - 1) / 2.0);
  }

 private:
  std::size_t n_ = 0;
  std::vector<unsigned char> adj_;
};

/// Agents m and n are collaborators iff their distance is strictly below
/// tau * omega * sqrt(2).
inline CollaborationGraph collaboration_graph(const Team& team, const ModelParams& params) {
  if (team.empty()) throw std::invalid_argument("collaboration_graph: empty team");
  const double threshold = params.tau * params.max_distance();
  CollaborationGraph g(team.size());
  for (std::size_t m = 0; m < team.size(); ++m)
    for (std::size_t n = m + 1; n < team.size(); ++n)
      if (agent_distance(team.agents[m], team.agents[n]) < threshold) g.connect(m, n);
  return g;
}

}  // namespace divsim
