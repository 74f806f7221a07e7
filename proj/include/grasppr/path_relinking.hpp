#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "local_search.hpp"
#include "problem.hpp"

namespace grasppr {

enum class pr_direction { forward, backward, back_and_forward, mixed };
enum class step_selection { greedy, greedy_randomized };
enum class in_path_policy { none, all, every_q, best_only };

struct pr_config {
  pr_direction direction = pr_direction::forward;
  step_selection selection = step_selection::greedy;
  int rcl_size = 3;          // greedy_randomized only
  double truncation = 1.0;   // fraction of the nominal path walked, in (0, 1]
  int min_distance = 4;      // endpoints closer than this are not relinked
  in_path_policy in_path_ls = in_path_policy::none;
  int every_q = 5;           // in_path_policy::every_q period
  int exterior_steps = 0;    // > 0 walks away from the guide instead (partitions only)
  neighborhood permutation_moves = neighborhood::insert;

  // local search used for the in-path policies
  search_depth ls_depth = search_depth::best_improving;
  neighborhood ls_moves = neighborhood::insert;

  void validate() const {
    if (!(truncation > 0.0 && truncation <= 1.0)) throw std::invalid_argument("pr_config: truncation must be in (0,1]");
    if (every_q < 1) throw std::invalid_argument("pr_config: every_q must be >= 1");
    if (min_distance < 0) throw std::invalid_argument("pr_config: min_distance must be >= 0");
    if (rcl_size < 1) throw std::invalid_argument("pr_config: rcl_size must be >= 1");
    if (exterior_steps < 0) throw std::invalid_argument("pr_config: exterior_steps must be >= 0");
  }
};

enum class path_stop {
  guard,      // endpoints closer than min_distance
  adjacent,   // every remaining step would land on the target
  truncated,  // step budget spent
  exhausted,  // no candidate step left (exterior / multi-parent)
};

template <class Solution>
struct visited_solution {
  Solution solution;
  objective_t objective;
  int distance;  // to the target of the step that produced it (-1 for multi-parent)
};

template <class Solution>
struct path_trace {
  std::vector<visited_solution<Solution>> visited;  // endpoints excluded
  std::optional<std::size_t> best_index;            // max objective, earliest on ties
  Solution initiating;
  Solution guiding;
  int initial_distance = 0;
  int final_distance = 0;  // between the walking frontier(s) and the target at the end
  path_stop stop = path_stop::adjacent;
  std::size_t first_segment = 0;  // back_and_forward: length of the backward part
  std::size_t local_searches = 0;

  [[nodiscard]] std::size_t size() const noexcept { return visited.size(); }
  [[nodiscard]] bool empty() const noexcept { return visited.empty(); }
};

template <class Solution>
struct relink_result {
  Solution best;
  objective_t best_objective = minus_infinity;
  path_trace<Solution> trace;
};

namespace detail {

/// Greedy: largest delta, lowest key on ties. Greedy-randomized: uniform
/// over the `rcl_size` best under the same ranking; no draw when only one
/// candidate qualifies.
template <class Move>
std::size_t select_step(std::vector<scored_move<Move>>& cand, step_selection selection, int rcl_size, random_stream& rng) {
  auto better = [](const scored_move<Move>& a, const scored_move<Move>& b) {
    return a.delta != b.delta ? a.delta > b.delta : a.key < b.key;
  };
  if (selection == step_selection::greedy || rcl_size <= 1 || cand.size() == 1) {
    return static_cast<std::size_t>(std::min_element(cand.begin(), cand.end(), better) - cand.begin());
  }
  const std::size_t k = std::min(cand.size(), static_cast<std::size_t>(rcl_size));
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end(), better);
  return rng.index(k);
}

inline int step_budget(int initial_distance, double truncation) {
  const int full = std::max(0, initial_distance - 1);
  return static_cast<int>(std::ceil(truncation * static_cast<double>(full) - 1e-9));
}

template <problem P>
class relinker {
public:
  using solution_t = typename P::solution_type;
  using move_t = typename P::move_type;

  relinker(const P& instance, const pr_config& cfg, random_stream& rng) : inst_(instance), cfg_(cfg), rng_(rng) {}

  // Walks from `from` toward `to`; appends to trace.
  path_stop walk(const solution_t& from, const solution_t& to, int budget, path_trace<solution_t>& trace) {
    auto st = inst_.make_state(from);
    int steps = 0;
    for (;;) {
      st.relink_moves(to, cfg_.permutation_moves, cand_);
      std::erase_if(cand_, [](const auto& c) { return c.remaining == 0; });
      if (cand_.empty()) {
        trace.final_distance = grasppr::distance(st.solution(), to);
        return path_stop::adjacent;
      }
      if (steps >= budget) {
        trace.final_distance = grasppr::distance(st.solution(), to);
        return path_stop::truncated;
      }
      const auto& step = cand_[select_step(cand_, cfg_.selection, cfg_.rcl_size, rng_)];
      const int remaining = step.remaining;
      st.apply(step.move);
      ++steps;
      trace.visited.push_back({st.solution(), st.objective(), remaining});
    }
  }

  // Alternates the walking end after every step; both ends move toward each other.
  path_stop walk_mixed(const solution_t& a, const solution_t& b, int budget, path_trace<solution_t>& trace) {
    auto front = inst_.make_state(a);
    auto back = inst_.make_state(b);
    int steps = 0;
    bool from_front = true;
    for (;;) {
      auto& mover = from_front ? front : back;
      const auto& target = (from_front ? back : front).solution();
      mover.relink_moves(target, cfg_.permutation_moves, cand_);
      std::erase_if(cand_, [](const auto& c) { return c.remaining == 0; });
      if (cand_.empty()) {
        trace.final_distance = grasppr::distance(front.solution(), back.solution());
        return path_stop::adjacent;
      }
      if (steps >= budget) {
        trace.final_distance = grasppr::distance(front.solution(), back.solution());
        return path_stop::truncated;
      }
      const auto& step = cand_[select_step(cand_, cfg_.selection, cfg_.rcl_size, rng_)];
      const int remaining = step.remaining;
      mover.apply(step.move);
      ++steps;
      trace.visited.push_back({mover.solution(), mover.objective(), remaining});
      from_front = !from_front;
    }
  }

  path_stop walk_exterior(const solution_t& from, const solution_t& away_from, int steps_allowed,
                          path_trace<solution_t>& trace) {
    if constexpr (requires(typename P::state& s) { s.exterior_moves(away_from, cand_); }) {
      auto st = inst_.make_state(from);
      for (int steps = 0;; ++steps) {
        st.exterior_moves(away_from, cand_);
        if (cand_.empty()) {
          trace.final_distance = grasppr::distance(st.solution(), away_from);
          return path_stop::exhausted;
        }
        if (steps >= steps_allowed) {
          trace.final_distance = grasppr::distance(st.solution(), away_from);
          return path_stop::truncated;
        }
        const auto& step = cand_[select_step(cand_, step_selection::greedy, 1, rng_)];
        const int remaining = step.remaining;
        st.apply(step.move);
        trace.visited.push_back({st.solution(), st.objective(), remaining});
      }
    } else {
      throw std::invalid_argument("exterior path relinking is only defined for partition solutions");
    }
  }

  path_stop walk_multi_parent(const solution_t& from, std::span<const solution_t> guides, int max_steps,
                              path_trace<solution_t>& trace) {
    auto st = inst_.make_state(from);
    for (int steps = 0;; ++steps) {
      st.multi_parent_moves(guides, cand_);
      if (cand_.empty()) return path_stop::exhausted;
      if (steps >= max_steps) return path_stop::truncated;
      int top = 0;
      for (const auto& c : cand_) top = std::max(top, c.frequency);
      std::erase_if(cand_, [top](const auto& c) { return c.frequency != top; });
      objective_t best_delta = cand_.front().delta;
      for (const auto& c : cand_) best_delta = std::max(best_delta, c.delta);
      std::erase_if(cand_, [best_delta](const auto& c) { return c.delta != best_delta; });
      const auto& step = cand_[cand_.size() == 1 ? 0 : rng_.index(cand_.size())];
      st.apply(step.move);
      trace.visited.push_back({st.solution(), st.objective(), -1});
    }
  }

  // Applies the in-path local-search policy and picks the overall best
  // among the endpoints, the visited solutions and their improved copies.
  relink_result<solution_t> finish(path_trace<solution_t> trace, const solution_t& s, const solution_t& t) {
    relink_result<solution_t> out;
    auto offer = [&](const solution_t& sol, objective_t value) {
      if (value > out.best_objective) {
        out.best = sol;
        out.best_objective = value;
        out.best.set_objective(value);
      }
    };
    offer(s, objective_of(inst_, s));
    offer(t, objective_of(inst_, t));

    for (std::size_t i = 0; i < trace.visited.size(); ++i) {
      const auto& v = trace.visited[i];
      if (!trace.best_index || v.objective > trace.visited[*trace.best_index].objective) trace.best_index = i;
      offer(v.solution, v.objective);
      const bool improve = cfg_.in_path_ls == in_path_policy::all ||
                           (cfg_.in_path_ls == in_path_policy::every_q && (i + 1) % static_cast<std::size_t>(cfg_.every_q) == 0);
      if (improve) improve_and_offer(v.solution, trace, offer);
    }
    if (cfg_.in_path_ls == in_path_policy::best_only && trace.best_index)
      improve_and_offer(trace.visited[*trace.best_index].solution, trace, offer);
    out.trace = std::move(trace);
    return out;
  }

private:
  template <class Offer>
  void improve_and_offer(const solution_t& sol, path_trace<solution_t>& trace, Offer& offer) {
    auto improved = local_search(inst_, sol, cfg_.ls_depth, rng_, cfg_.ls_moves);
    ++trace.local_searches;
    offer(improved, objective_of(inst_, improved));
  }

  const P& inst_;
  const pr_config& cfg_;
  random_stream& rng_;
  std::vector<scored_move<move_t>> cand_;
};

}  // namespace detail

/// Relinks two solutions under `cfg`.
///
/// Forward walks from the worse endpoint to the better one (ties: from `s`
/// to `t`), backward the other way round, back_and_forward runs backward
/// then forward, and mixed moves both ends toward each other alternately.
/// Each step strictly reduces the distance to the current target; a step
/// that would land exactly on the target is never taken, so the walk stops
/// one move short of it. `truncation` bounds the steps of each directional
/// walk by ceil(rho * (|delta| - 1)). Endpoints closer than `min_distance`
/// produce an empty trace. The returned `best` is the best of the two
/// endpoints, the visited solutions and any in-path local-search copies.
template <problem P>
relink_result<typename P::solution_type> relink(const P& instance, const typename P::solution_type& s,
                                                const typename P::solution_type& t, const pr_config& cfg,
                                                random_stream& rng) {
  cfg.validate();
  if (s.size() != t.size() || s.size() != instance.size()) throw dimension_error("relink: size mismatch");
  if (s == t) throw std::invalid_argument("relink: endpoints are identical");

  const objective_t fs = objective_of(instance, s), ft = objective_of(instance, t);
  const bool t_better = ft >= fs;
  const auto& better = t_better ? t : s;
  const auto& worse = t_better ? s : t;

  detail::relinker<P> r(instance, cfg, rng);
  path_trace<typename P::solution_type> trace;
  const int dist = grasppr::distance(s, t);
  trace.initial_distance = dist;
  trace.final_distance = dist;

  if (cfg.exterior_steps > 0) {
    trace.initiating = better;
    trace.guiding = worse;
    trace.stop = r.walk_exterior(better, worse, cfg.exterior_steps, trace);
    return r.finish(std::move(trace), s, t);
  }
  if (dist < cfg.min_distance) {
    trace.initiating = worse;
    trace.guiding = better;
    trace.stop = path_stop::guard;
    return r.finish(std::move(trace), s, t);
  }

  const int budget = detail::step_budget(dist, cfg.truncation);
  switch (cfg.direction) {
    case pr_direction::forward:
      trace.initiating = worse;
      trace.guiding = better;
      trace.stop = r.walk(worse, better, budget, trace);
      break;
    case pr_direction::backward:
      trace.initiating = better;
      trace.guiding = worse;
      trace.stop = r.walk(better, worse, budget, trace);
      break;
    case pr_direction::back_and_forward:
      trace.initiating = better;
      trace.guiding = worse;
      r.walk(better, worse, budget, trace);
      trace.first_segment = trace.visited.size();
      trace.stop = r.walk(worse, better, budget, trace);
      break;
    case pr_direction::mixed:
      trace.initiating = worse;
      trace.guiding = better;
      trace.stop = r.walk_mixed(worse, better, budget, trace);
      break;
  }
  return r.finish(std::move(trace), s, t);
}

/// Walks from `s` away from `t`: every step flips one attribute the two share
/// (largest delta, lowest index on ties), so the distance to both endpoints
/// grows by one per step. Stops after `steps` steps or when nothing is shared.
template <problem P>
relink_result<typename P::solution_type> exterior_relink(const P& instance, const typename P::solution_type& s,
                                                         const typename P::solution_type& t, int steps,
                                                         random_stream& rng) {
  if (steps < 1) throw std::invalid_argument("exterior_relink: steps must be >= 1");
  if (s.size() != t.size() || s.size() != instance.size()) throw dimension_error("exterior_relink: size mismatch");
  if (s == t) throw std::invalid_argument("exterior_relink: endpoints are identical");
  pr_config cfg;
  detail::relinker<P> r(instance, cfg, rng);
  path_trace<typename P::solution_type> trace;
  trace.initiating = s;
  trace.guiding = t;
  trace.initial_distance = grasppr::distance(s, t);
  trace.stop = r.walk_exterior(s, t, steps, trace);
  return r.finish(std::move(trace), s, t);
}

/// Path from `s` toward the region of several guides. Candidate attributes
/// are those of any guide missing from the current solution, weighted by
/// how many guides hold them; the most frequent attributes are kept, the
/// largest delta among them wins and exact ties are drawn uniformly.
/// Stops after `max_steps` incorporated attributes or when none is missing.
template <problem P>
relink_result<typename P::solution_type> multi_parent_relink(const P& instance, const typename P::solution_type& s,
                                                             std::span<const typename P::solution_type> guides,
                                                             int max_steps, random_stream& rng) {
  if (guides.empty()) throw std::invalid_argument("multi_parent_relink: empty guide set");
  if (max_steps < 0) throw std::invalid_argument("multi_parent_relink: max_steps must be >= 0");
  pr_config cfg;
  detail::relinker<P> r(instance, cfg, rng);
  path_trace<typename P::solution_type> trace;
  trace.initiating = s;
  trace.guiding = guides.front();
  trace.stop = r.walk_multi_parent(s, guides, max_steps, trace);

  // best over the start and the visited solutions only; guides are not endpoints here
  auto out = r.finish(std::move(trace), s, s);
  return out;
}

}  // namespace grasppr
