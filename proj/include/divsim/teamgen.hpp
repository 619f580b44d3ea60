#pragma once

// Team and task generation for requested IFD / DFD targets.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "divsim/core.hpp"
#include "divsim/rng.hpp"

namespace divsim {

struct TeamSpec {
  double target_ifd = 0.0;
  double target_dfd = 0.0;
  GenerationMode mode = GenerationMode::IfdsDistribution;
  double delta = 5.0;
  bool mix_skills = true;

  static TeamSpec from_params(const ModelParams& p, double ifd_target, double dfd_target) {
    return TeamSpec{ifd_target, dfd_target, p.generation_mode, p.delta, p.mix_skills};
  }

  void validate() const {
    if (!(target_ifd >= 0.0 && target_ifd <= 1.0)) throw std::invalid_argument("TeamSpec: target_ifd outside [0,1]");
    if (!(target_dfd >= 0.0 && target_dfd <= 1.0)) throw std::invalid_argument("TeamSpec: target_dfd outside [0,1]");
    if (!(delta >= 1.0)) throw std::invalid_argument("TeamSpec: delta must be >= 1");
  }
};

/// Standard deviation of the per-agent IFDS distribution for a width delta.
inline double ifds_spread_sd(double delta) { return 0.05 * delta; }

/// Task with i.i.d. uniform (0,1) component requirements rescaled to sum theta.
inline Task generate_task(std::size_t id, const ModelParams& params, Rng& rng) {
  std::vector<double> r(static_cast<std::size_t>(params.n_functions));
  for (double& v : r) v = rng.uniform01();
  const double sum = std::accumulate(r.begin(), r.end(), 0.0);
  for (double& v : r) v *= params.theta / sum;
  return Task(id, std::move(r));
}

inline std::vector<Task> generate_tasks(const ModelParams& params, Rng& rng) {
  std::vector<Task> tasks;
  tasks.reserve(static_cast<std::size_t>(params.n_tasks));
  for (int k = 0; k < params.n_tasks; ++k) tasks.push_back(generate_task(static_cast<std::size_t>(k), params, rng));
  return tasks;
}

namespace detail {

// Branch-and-bound over partitions of n_agents into at most n_functions
// parts, visited as non-increasing sequences in ascending lexicographic
// order. Only strict improvements are kept, so among equally good
// partitions the lexicographically smallest one wins.
class DominantCountSearch {
 public:
  DominantCountSearch(double target, int n_agents, int n_functions)
      : target_(target), n_(n_agents), k_(n_functions), cur_(static_cast<std::size_t>(n_functions), 0) {}

  std::vector<int> run() {
    visit(0, n_, n_, 0);
    return best_;
  }

 private:
  double dfd_of(long long sumsq) const {
    const double n = n_;
    return (1.0 - static_cast<double>(sumsq) / (n * n)) / (1.0 - 1.0 / k_);
  }

  static long long min_sumsq(int m, int slots) {
    const long long q = m / slots, r = m % slots;
    return r * (q + 1) * (q + 1) + (slots - r) * q * q;
  }

  static long long max_sumsq(int m, int cap) {
    const long long full = m / cap, rest = m % cap;
    return full * cap * cap + rest * rest;
  }

  void visit(std::size_t pos, int remaining, int cap, long long sumsq) {
    if (remaining == 0) {
      const double err = std::abs(dfd_of(sumsq) - target_);
      if (err < best_err_ - 1e-12) {
        best_err_ = err;
        best_ = cur_;
      }
      return;
    }
    const int slots = k_ - static_cast<int>(pos);
    if (slots <= 0) return;
    // DFD decreases with the sum of squares.
    const double hi = dfd_of(sumsq + min_sumsq(remaining, slots));
    const double lo = dfd_of(sumsq + max_sumsq(remaining, cap));
    const double bound = target_ < lo ? lo - target_ : (target_ > hi ? target_ - hi : 0.0);
    if (bound >= best_err_ - 1e-12) return;

    const int first = (remaining + slots - 1) / slots;
    for (int part = first; part <= std::min(cap, remaining); ++part) {
      cur_[pos] = part;
      visit(pos + 1, remaining - part, part, sumsq + static_cast<long long>(part) * part);
      cur_[pos] = 0;
    }
  }

  double target_;
  int n_;
  int k_;
  std::vector<int> cur_;
  std::vector<int> best_;
  double best_err_ = std::numeric_limits<double>::infinity();
};

}  // namespace detail

/// Per-function dominant counts (non-increasing, summing to n_agents) whose
/// DFD is closest to the target.
inline std::vector<int> dominant_counts_for_dfd(double target_dfd, int n_agents, int n_functions) {
  if (n_agents < 1 || n_functions < 1) throw std::invalid_argument("dominant_counts_for_dfd: counts must be positive");
  if (!(target_dfd >= 0.0 && target_dfd <= 1.0))
    throw std::invalid_argument("dominant_counts_for_dfd: target outside [0,1]");
  if (n_functions == 1) return {n_agents};
  return detail::DominantCountSearch(target_dfd, n_agents, n_functions).run();
}

/// Expands counts into one dominant function per agent, function 0 first.
inline std::vector<std::size_t> expand_counts(const std::vector<int>& counts) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < counts.size(); ++j)
    out.insert(out.end(), static_cast<std::size_t>(std::max(counts[j], 0)), j);
  return out;
}

/// Pure specialists (assigned per counts, ids first) followed by absolute
/// generalists.
inline Team generate_specgen_team(int n_generalists, const std::vector<int>& counts, const ModelParams& params,
                                  Rng& rng) {
  const int n_specialists = params.n_agents - n_generalists;
  if (n_generalists < 0 || n_specialists < 0)
    throw std::invalid_argument("generate_specgen_team: n_generalists outside [0, n_agents]");
  if (counts.size() != static_cast<std::size_t>(params.n_functions) ||
      std::any_of(counts.begin(), counts.end(), [](int c) { return c < 0; }) ||
      std::accumulate(counts.begin(), counts.end(), 0) != n_specialists)
    throw std::invalid_argument("generate_specgen_team: counts must cover exactly the " +
                                std::to_string(n_specialists) + " specialists");

  const auto nf = static_cast<std::size_t>(params.n_functions);
  std::vector<Agent> agents;
  for (std::size_t f : expand_counts(counts)) {
    std::vector<double> s(nf, 0.0);
    s[f] = params.omega;
    agents.push_back(make_agent(agents.size(), std::move(s), rng));
  }
  for (int g = 0; g < n_generalists; ++g)
    agents.push_back(make_agent(agents.size(), std::vector<double>(nf, params.omega / static_cast<double>(nf)), rng));
  return Team(std::move(agents));
}

namespace detail {

// Discrete half-normal weights exp(-m^2 / (2 sigma^2)), m = 0..n-1,
// normalized to sum to one. Non-increasing in m.
inline std::vector<double> half_normal_profile(double sigma, std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double x = static_cast<double>(m) / sigma;
    w[m] = std::exp(-0.5 * x * x);
  }
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= sum;
  return w;
}

inline double profile_ifds(const std::vector<double>& p) { return normalized_blau(p); }

}  // namespace detail

/// Skill vector with the given IFDS. The profile comes from a discrete
/// half-normal whose width is found by bisection; its peak goes to the
/// dominant function. With mix the remaining values are scattered at
/// random, otherwise they fill the other indices in increasing order.
inline std::vector<double> skill_vector_for_ifds(double target_ifds, std::size_t dominant_function, bool mix,
                                                 const ModelParams& params, Rng& rng) {
  const auto n = static_cast<std::size_t>(params.n_functions);
  if (!(target_ifds >= 0.0 && target_ifds <= 1.0))
    throw std::invalid_argument("skill_vector_for_ifds: target outside [0,1]");
  if (dominant_function >= n) throw std::invalid_argument("skill_vector_for_ifds: dominant function out of range");
  if (n == 1) return {params.omega};

  std::vector<double> profile;
  if (target_ifds <= kTolerance) {
    profile.assign(n, 0.0);
    profile[0] = 1.0;
  } else if (target_ifds >= 1.0 - kTolerance) {
    profile.assign(n, 1.0 / static_cast<double>(n));
  } else {
    double lo = std::log(1e-3), hi = std::log(1e8);
    if (!(detail::profile_ifds(detail::half_normal_profile(std::exp(lo), n)) <= target_ifds &&
          detail::profile_ifds(detail::half_normal_profile(std::exp(hi), n)) >= target_ifds))
      throw std::runtime_error("skill_vector_for_ifds: bisection bracket does not contain target " +
                               std::to_string(target_ifds));
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (detail::profile_ifds(detail::half_normal_profile(std::exp(mid), n)) < target_ifds)
        lo = mid;
      else
        hi = mid;
    }
    profile = detail::half_normal_profile(std::exp(0.5 * (lo + hi)), n);
    if (std::abs(detail::profile_ifds(profile) - target_ifds) > 1e-6)
      throw std::runtime_error("skill_vector_for_ifds: bisection did not converge");
  }

  std::vector<std::size_t> others;
  for (std::size_t j = 0; j < n; ++j)
    if (j != dominant_function) others.push_back(j);
  if (mix) rng.shuffle(std::span<std::size_t>(others));

  std::vector<double> skills(n, 0.0);
  skills[dominant_function] = profile[0] * params.omega;
  for (std::size_t m = 1; m < n; ++m) skills[others[m - 1]] = profile[m] * params.omega;
  return skills;
}

/// Per-agent IFDS targets: truncated Gaussian around target, then shifted
/// (and re-truncated) until the mean equals target.
inline std::vector<double> draw_ifds_targets(double target, double sd, std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (double& v : x) {
    v = rng.normal(target, sd);
    for (int tries = 0; (v < 0.0 || v > 1.0) && tries < 1000; ++tries) v = rng.normal(target, sd);
    v = std::clamp(v, 0.0, 1.0);
  }
  auto mean = [&x] { return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size()); };
  for (int it = 0; it < 100; ++it) {
    const double shift = target - mean();
    if (std::abs(shift) < 1e-12) break;
    for (double& v : x) v = std::clamp(v + shift, 0.0, 1.0);
  }
  if (std::abs(mean() - target) > 1e-3)
    throw std::runtime_error("draw_ifds_targets: could not match mean IFDS " + std::to_string(target));
  return x;
}

/// Builds a team realizing the requested IFD / DFD. Achieved IFD is within
/// 1e-3 of the target; achieved DFD is whatever the dominant assignment and
/// tie-breaking give.
inline Team generate_team(const TeamSpec& spec, const ModelParams& params, Rng& rng) {
  spec.validate();
  if (spec.mode == GenerationMode::SpecGen) {
    const int n_gen = static_cast<int>(std::lround(spec.target_ifd * params.n_agents));
    const int n_spec = params.n_agents - n_gen;
    std::vector<int> counts(static_cast<std::size_t>(params.n_functions), 0);
    if (n_spec > 0) counts = dominant_counts_for_dfd(spec.target_dfd, n_spec, params.n_functions);
    return generate_specgen_team(n_gen, counts, params, rng);
  }

  const auto n = static_cast<std::size_t>(params.n_agents);
  std::vector<double> targets = spec.mode == GenerationMode::UniformIfds
                                    ? std::vector<double>(n, spec.target_ifd)
                                    : draw_ifds_targets(spec.target_ifd, ifds_spread_sd(spec.delta), n, rng);
  const auto dominant = expand_counts(dominant_counts_for_dfd(spec.target_dfd, params.n_agents, params.n_functions));

  std::vector<Agent> agents;
  agents.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    agents.push_back(make_agent(i, skill_vector_for_ifds(targets[i], dominant[i], spec.mix_skills, params, rng), rng));
  return Team(std::move(agents));
}

}  // namespace divsim
