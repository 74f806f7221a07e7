#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "core.hpp"
#include "problem.hpp"

namespace grasppr {

enum class search_depth { first_improving, best_improving };

struct local_search_stats {
  std::size_t moves = 0;
  std::size_t passes = 0;
};

/// Descent to a local optimum of `nb`. Best-improving applies the largest
/// improving move of each pass (first one in scan order on ties) and draws
/// nothing from `rng`. First-improving applies the first improving move; for
/// problems with a randomized first scan each pass starts at a random offset.
template <problem P>
typename P::solution_type local_search(const P& instance, typename P::solution_type start, search_depth depth,
                                       random_stream& rng, neighborhood nb = neighborhood::insert,
                                       local_search_stats* stats = nullptr) {
  using move_t = typename P::move_type;
  auto st = instance.make_state(std::move(start));
  local_search_stats local;
  for (;;) {
    ++local.passes;
    std::optional<move_t> chosen;
    if (depth == search_depth::best_improving) {
      st.scan(nb, 0, [&](const move_t& m) {
        if (m.delta > 0 && (!chosen || m.delta > chosen->delta)) chosen = m;
        return false;
      });
    } else {
      std::size_t offset = 0;
      if constexpr (P::randomized_first_scan) offset = rng.index(std::max<std::size_t>(1, st.scan_extent()));
      st.scan(nb, offset, [&](const move_t& m) {
        if (m.delta > 0) {
          chosen = m;
          return true;
        }
        return false;
      });
    }
    if (!chosen) break;
    st.apply(*chosen);
    ++local.moves;
  }
  if (stats) *stats = local;
  return st.solution();
}

/// Every move of the neighborhood with its exact delta, in scan order.
template <problem P>
std::vector<typename P::move_type> enumerate_moves(const P& instance, const typename P::solution_type& s,
                                                   neighborhood nb = neighborhood::insert) {
  using move_t = typename P::move_type;
  std::vector<move_t> out;
  auto st = instance.make_state(s);
  st.scan(nb, 0, [&](const move_t& m) {
    out.push_back(m);
    return false;
  });
  return out;
}

template <problem P>
bool is_local_optimum(const P& instance, const typename P::solution_type& s, neighborhood nb = neighborhood::insert) {
  using move_t = typename P::move_type;
  auto st = instance.make_state(s);
  return !st.scan(nb, 0, [](const move_t& m) { return m.delta > 0; });
}

}  // namespace grasppr
