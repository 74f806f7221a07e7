#pragma once

#include <concepts>
#include <cstddef>
#include <vector>

#include "core.hpp"

namespace grasppr {

/// Local-search and relinking move family. For partitions `insert` is the
/// single-vertex transfer and `swap` exchanges one vertex from each side.
enum class neighborhood { insert, swap };

/// Construction candidate: `id` is problem-defined, smaller ids win ties.
struct candidate {
  int id;
  objective_t attractiveness;
};

/// A relinking step offered by a problem state.
template <class Move>
struct scored_move {
  Move move;
  objective_t delta;
  int key;        // tie-break id: element / vertex
  int remaining;  // distance to the target after the step
  int frequency = 1;
};

// The generic algorithms only need the members listed here. Both bundled
// adapters (lop_instance, maxcut_instance) satisfy it.
template <class P>
concept problem = requires(const P& p, const typename P::solution_type& s, typename P::state& st,
                           const typename P::move_type& m, std::vector<scored_move<typename P::move_type>>& out) {
  { p.size() } -> std::convertible_to<int>;
  { p.evaluate(s) } -> std::same_as<objective_t>;
  { p.make_state(s) } -> std::same_as<typename P::state>;
  { p.start_construction() } -> std::same_as<typename P::construction>;
  { p.default_diversity_threshold() } -> std::convertible_to<int>;
  { st.objective() } -> std::same_as<objective_t>;
  { st.solution() } -> std::convertible_to<const typename P::solution_type&>;
  { st.scan_extent() } -> std::convertible_to<std::size_t>;
  st.apply(m);
  st.relink_moves(s, neighborhood::insert, out);
  st.multi_parent_moves(std::vector<typename P::solution_type>{}, out);
};

/// Evaluates and stores the objective in the solution's cache.
template <class P>
objective_t evaluate(const P& instance, typename P::solution_type& solution) {
  const objective_t value = instance.evaluate(solution);
  solution.set_objective(value);
  return value;
}

/// Cached objective when present, full evaluation otherwise.
template <class P>
objective_t objective_of(const P& instance, const typename P::solution_type& solution) {
  if (auto cached = solution.cached_objective()) return *cached;
  return instance.evaluate(solution);
}

}  // namespace grasppr
