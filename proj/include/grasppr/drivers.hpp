#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "construction.hpp"
#include "core.hpp"
#include "elite_set.hpp"
#include "local_search.hpp"
#include "path_relinking.hpp"
#include "problem.hpp"

namespace grasppr {

/// `construction` is multi-start semi-greedy sampling without local search.
enum class variant { construction, grasp, static_pr, dynamic_pr, evolutionary_pr };

struct run_config {
  variant algorithm = variant::grasp;
  std::optional<double> time_limit;  // seconds, wall clock, checked between iterations
  std::optional<std::uint64_t> iteration_limit;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> restart_kappa;

  rcl_config rcl;
  search_depth depth = search_depth::best_improving;
  neighborhood ls_moves = neighborhood::insert;
  pr_config pr;

  std::size_t elite_k = 10;
  std::optional<int> diversity_threshold;  // problem default when unset
  guide_policy guide = guide_policy::uniform;
  std::size_t static_sample = 100;
  std::uint64_t pr_period = 1;       // dynamic: relink every pr_period-th iteration
  double evolutionary_split = 0.5;   // share of the time budget for the dynamic phase

  void validate() const {
    if (!time_limit && !iteration_limit) throw std::invalid_argument("run_config: set a time limit or an iteration limit");
    if (time_limit && !(*time_limit >= 0.0)) throw std::invalid_argument("run_config: time limit must be >= 0");
    if (restart_kappa && *restart_kappa < 1) throw std::invalid_argument("run_config: kappa must be >= 1");
    if (elite_k < 1) throw std::invalid_argument("run_config: elite capacity must be >= 1");
    if (pr_period < 1) throw std::invalid_argument("run_config: pr period must be >= 1");
    if (!(evolutionary_split > 0.0 && evolutionary_split <= 1.0))
      throw std::invalid_argument("run_config: evolutionary split must be in (0,1]");
    rcl.validate();
    pr.validate();
  }
};

struct incumbent_point {
  double elapsed_s;
  objective_t objective;
};

template <class Solution>
struct run_report {
  Solution best_solution;
  objective_t best_objective = minus_infinity;
  std::vector<incumbent_point> incumbent_series;
  std::uint64_t iterations = 0;
  std::uint64_t restarts = 0;
  std::uint64_t pr_calls = 0;
  std::uint64_t pr_improvements = 0;  // relink outputs strictly better than both endpoints
  std::uint64_t post_pr_calls = 0;    // static phase 2 / evolutionary post phase
  double elapsed_s = 0.0;
  std::vector<Solution> elite;            // members at the end of the run
  std::vector<Solution> phase_one_elite;  // static / evolutionary: members when the first phase ended
};

/// Mutable state a restart acts on.
template <class Solution>
struct search_state {
  elite_set<Solution> elite;
  random_stream root;
  random_stream rng;
  std::uint64_t stagnation = 0;  // iterations since the incumbent last improved
  std::uint64_t restarts = 0;

  search_state(elite_set<Solution> es, std::uint64_t seed) : elite(std::move(es)), root(seed), rng(seed) {}
};

enum class restart_decision { restarted, continued };

/// After kappa iterations without incumbent improvement: empty the pool,
/// switch to a fresh random substream and reset the stagnation counter.
/// The incumbent is owned by the caller and is left untouched.
template <class Solution>
restart_decision maybe_restart(search_state<Solution>& st, std::optional<std::uint64_t> kappa) {
  if (!kappa) return restart_decision::continued;
  if (*kappa < 1) throw std::invalid_argument("maybe_restart: kappa must be >= 1");
  if (st.stagnation < *kappa) return restart_decision::continued;
  st.elite.clear();
  ++st.restarts;
  st.rng = st.root.substream(st.restarts);
  st.stagnation = 0;
  return restart_decision::restarted;
}

namespace detail {

class run_clock {
public:
  run_clock() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

template <problem P>
class driver {
public:
  using solution_t = typename P::solution_type;

  driver(const P& instance, const run_config& cfg, random_stream& rng)
      : inst_(instance),
        cfg_(cfg),
        state_(elite_set<solution_t>(cfg.elite_k, cfg.diversity_threshold.value_or(instance.default_diversity_threshold())),
               rng.seed()),
        rng_(rng) {
    cfg_.validate();
    pr_cfg_ = cfg_.pr;
    pr_cfg_.ls_depth = cfg_.depth;
    pr_cfg_.ls_moves = cfg_.ls_moves;
  }

  run_report<solution_t> run() {
    switch (cfg_.algorithm) {
      case variant::construction: multistart(false); break;
      case variant::grasp: multistart(true); break;
      case variant::dynamic_pr: dynamic_phase(cfg_.time_limit); break;
      case variant::static_pr: run_static(); break;
      case variant::evolutionary_pr: run_evolutionary(); break;
    }
    report_.elapsed_s = clock_.elapsed();
    report_.restarts = state_.restarts;
    for (const auto& m : state_.elite.members()) report_.elite.push_back(m.solution);
    return std::move(report_);
  }

private:
  random_stream& rng() { return restarted_ ? state_.rng : rng_; }

  bool out_of_time(std::optional<double> limit) const { return limit && clock_.elapsed() >= *limit; }
  bool out_of_iterations() const { return cfg_.iteration_limit && report_.iterations >= *cfg_.iteration_limit; }

  bool offer_incumbent(const solution_t& s, objective_t f) {
    if (f <= report_.best_objective) return false;
    report_.best_solution = s;
    report_.best_solution.set_objective(f);
    report_.best_objective = f;
    report_.incumbent_series.push_back({clock_.elapsed(), f});
    return true;
  }

  solution_t improve(solution_t s) { return local_search(inst_, std::move(s), cfg_.depth, rng(), cfg_.ls_moves); }

  solution_t grasp_iteration(bool with_local_search) {
    auto s = construct(inst_, cfg_.rcl, rng());
    return with_local_search ? improve(std::move(s)) : s;
  }

  // Relinks, improves the path's best solution and offers it to the incumbent.
  solution_t relink_and_improve(const solution_t& a, const solution_t& b) {
    ++report_.pr_calls;
    auto result = relink(inst_, a, b, pr_cfg_, rng());
    auto out = improve(std::move(result.best));
    const objective_t f = objective_of(inst_, out);
    if (f > std::max(objective_of(inst_, a), objective_of(inst_, b))) ++report_.pr_improvements;
    return out;
  }

  void multistart(bool with_local_search) {
    while (!out_of_iterations() && !out_of_time(cfg_.time_limit)) {
      auto s = grasp_iteration(with_local_search);
      ++report_.iterations;
      offer_incumbent(s, objective_of(inst_, s));
    }
  }

  void dynamic_phase(std::optional<double> limit) {
    while (!out_of_iterations() && !out_of_time(limit)) {
      auto s = grasp_iteration(true);
      ++report_.iterations;
      const objective_t fs = objective_of(inst_, s);
      bool improved = offer_incumbent(s, fs);
      auto& elite = state_.elite;
      if (!elite.empty() && report_.iterations % cfg_.pr_period == 0) {
        auto guide = elite.select_guide(s, cfg_.guide, rng());
        if (guide && !(*guide == s)) {
          auto r = relink_and_improve(s, *guide);
          const objective_t fr = objective_of(inst_, r);
          improved = offer_incumbent(r, fr) || improved;
          elite.try_add(r, fr);
        }
      }
      elite.try_add(s, fs);
      state_.stagnation = improved ? 0 : state_.stagnation + 1;
      if (maybe_restart(state_, cfg_.restart_kappa) == restart_decision::restarted) restarted_ = true;
    }
  }

  void run_static() {
    auto& elite = state_.elite;
    while (report_.iterations < cfg_.static_sample && !out_of_iterations() && !out_of_time(cfg_.time_limit)) {
      auto s = grasp_iteration(true);
      ++report_.iterations;
      const objective_t fs = objective_of(inst_, s);
      offer_incumbent(s, fs);
      elite.try_add(s, fs);
    }
    for (const auto& m : elite.members()) report_.phase_one_elite.push_back(m.solution);
    // the pool is frozen: relinked outputs only update the incumbent
    while (!out_of_time(cfg_.time_limit)) {
      auto pair = elite.next_unrelinked_pair();
      if (!pair) break;
      ++report_.post_pr_calls;
      auto r = relink_and_improve(pair->first, pair->second);
      offer_incumbent(r, objective_of(inst_, r));
    }
  }

  void run_evolutionary() {
    std::optional<double> first_limit;
    if (cfg_.time_limit) first_limit = *cfg_.time_limit * cfg_.evolutionary_split;
    dynamic_phase(first_limit);
    auto& elite = state_.elite;
    for (const auto& m : elite.members()) report_.phase_one_elite.push_back(m.solution);
    while (!out_of_time(cfg_.time_limit)) {
      auto pair = elite.next_unrelinked_pair();
      if (!pair) break;
      ++report_.post_pr_calls;
      auto r = relink_and_improve(pair->first, pair->second);
      const objective_t fr = objective_of(inst_, r);
      offer_incumbent(r, fr);
      elite.try_add(r, fr);
    }
  }

  const P& inst_;
  run_config cfg_;
  pr_config pr_cfg_;
  search_state<solution_t> state_;
  random_stream& rng_;
  bool restarted_ = false;
  run_clock clock_;
  run_report<solution_t> report_;
};

template <problem P>
run_report<typename P::solution_type> run_variant(const P& instance, run_config cfg, variant v, random_stream& rng) {
  cfg.algorithm = v;
  return driver<P>(instance, cfg, rng).run();
}

}  // namespace detail

template <problem P>
run_report<typename P::solution_type> run_construction(const P& instance, const run_config& cfg, random_stream& rng) {
  return detail::run_variant(instance, cfg, variant::construction, rng);
}

/// Construct, improve, keep the best, until the stopping criterion holds.
template <problem P>
run_report<typename P::solution_type> run_grasp(const P& instance, const run_config& cfg, random_stream& rng) {
  return detail::run_variant(instance, cfg, variant::grasp, rng);
}

/// GRASP iterations with a relink after each local search (every
/// `pr_period` iterations). The pool is filled by the first GRASP solutions;
/// afterwards the improved relink output and the local optimum are both
/// offered to it.
template <problem P>
run_report<typename P::solution_type> run_dynamic_pr(const P& instance, const run_config& cfg, random_stream& rng) {
  return detail::run_variant(instance, cfg, variant::dynamic_pr, rng);
}

/// `static_sample` GRASP iterations feed the pool, then every pool pair is
/// relinked once; those outputs never enter the pool.
template <problem P>
run_report<typename P::solution_type> run_static_pr(const P& instance, const run_config& cfg, random_stream& rng) {
  return detail::run_variant(instance, cfg, variant::static_pr, rng);
}

/// Dynamic GRASP-PR for `evolutionary_split` of the time budget (or the whole
/// iteration budget), then relinks pool pairs not yet relinked, offering each
/// output back to the pool, until no such pair is left or time runs out.
template <problem P>
run_report<typename P::solution_type> run_evolutionary_pr(const P& instance, const run_config& cfg, random_stream& rng) {
  return detail::run_variant(instance, cfg, variant::evolutionary_pr, rng);
}

/// Runs `cfg.algorithm` with a stream seeded from `cfg.seed`.
template <problem P>
run_report<typename P::solution_type> run(const P& instance, const run_config& cfg) {
  random_stream rng(cfg.seed);
  return detail::driver<P>(instance, cfg, rng).run();
}

inline const char* to_string(variant v) {
  switch (v) {
    case variant::construction: return "construction";
    case variant::grasp: return "grasp";
    case variant::static_pr: return "static_pr";
    case variant::dynamic_pr: return "dynamic_pr";
    case variant::evolutionary_pr: return "evolutionary_pr";
  }
  return "?";
}

}  // namespace grasppr
