#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "problem.hpp"

namespace grasppr {

enum class rcl_mode { value_threshold, cardinality };

struct rcl_config {
  rcl_mode mode = rcl_mode::value_threshold;
  double alpha_low = 0.0;
  double alpha_high = 0.3;
  bool per_step_alpha = true;  // false: one alpha per construction

  void validate() const {
    if (!(alpha_low >= 0.0 && alpha_high <= 1.0 && alpha_low <= alpha_high))
      throw std::invalid_argument("rcl_config: need 0 <= alpha_low <= alpha_high <= 1");
  }
};

/// Members with g(v) >= (1 - alpha) * g_max, returned in candidate order.
/// The comparison is the literal formula, also for negative g_max.
inline std::vector<int> build_rcl_value(std::span<const candidate> cl, double alpha) {
  if (cl.empty()) throw std::invalid_argument("build_rcl_value: empty candidate list");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("build_rcl_value: alpha outside [0,1]");
  objective_t g_max = cl.front().attractiveness;
  for (const auto& c : cl) g_max = std::max(g_max, c.attractiveness);
  const long double threshold = (1.0L - static_cast<long double>(alpha)) * static_cast<long double>(g_max);
  // absorbs the rounding of (1 - alpha) so that e.g. alpha = 0.2, g_max = 10 admits g = 8
  const long double slack = std::min(0.5L, 1e-12L * std::max(1.0L, std::fabs(threshold)));
  std::vector<int> rcl;
  for (const auto& c : cl)
    if (c.attractiveness == g_max || static_cast<long double>(c.attractiveness) >= threshold - slack) rcl.push_back(c.id);
  return rcl;
}

/// p_max = 1 + floor(alpha * (|CL| - 1)).
inline std::size_t rcl_cardinality(std::size_t cl_size, double alpha) {
  if (cl_size == 0) throw std::invalid_argument("rcl_cardinality: empty candidate list");
  const double raw = alpha * static_cast<double>(cl_size - 1);
  return 1 + static_cast<std::size_t>(std::floor(raw + 1e-9));
}

/// The p_max most attractive members; ties ranked by lowest id.
inline std::vector<int> build_rcl_cardinality(std::span<const candidate> cl, double alpha) {
  if (cl.empty()) throw std::invalid_argument("build_rcl_cardinality: empty candidate list");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("build_rcl_cardinality: alpha outside [0,1]");
  const std::size_t p_max = rcl_cardinality(cl.size(), alpha);
  std::vector<candidate> ranked(cl.begin(), cl.end());
  auto better = [](const candidate& a, const candidate& b) {
    return a.attractiveness != b.attractiveness ? a.attractiveness > b.attractiveness : a.id < b.id;
  };
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(p_max), ranked.end(), better);
  std::vector<int> rcl;
  rcl.reserve(p_max);
  for (std::size_t i = 0; i < p_max; ++i) rcl.push_back(ranked[i].id);
  return rcl;
}

inline std::vector<int> build_rcl(std::span<const candidate> cl, rcl_mode mode, double alpha) {
  return mode == rcl_mode::value_threshold ? build_rcl_value(cl, alpha) : build_rcl_cardinality(cl, alpha);
}

/// Semi-greedy adaptive construction. Each step draws alpha in
/// (alpha_low, alpha_high], restricts the candidate list and adds a uniformly
/// chosen RCL member. A collapsed range with alpha 0 gives the greedy
/// solution with ties resolved toward the lowest candidate id.
template <problem P, class Observer>
typename P::solution_type construct(const P& instance, const rcl_config& cfg, random_stream& rng, Observer&& observe) {
  cfg.validate();
  auto state = instance.start_construction();
  std::vector<candidate> cl;
  double alpha = cfg.per_step_alpha ? 0.0 : rng.half_open_above(cfg.alpha_low, cfg.alpha_high);
  while (!state.complete()) {
    state.candidates(cl);
    if (cfg.per_step_alpha) alpha = rng.half_open_above(cfg.alpha_low, cfg.alpha_high);
    std::vector<int> rcl = build_rcl(cl, cfg.mode, alpha);
    std::sort(rcl.begin(), rcl.end());
    // alpha == 0 is the greedy limit: ties go to the lowest id, no draw
    const int chosen = rcl.size() == 1 || alpha == 0.0 ? rcl.front() : rcl[rng.index(rcl.size())];
    observe(std::span<const candidate>(cl), alpha, std::span<const int>(rcl), chosen);
    state.add(chosen);
  }
  return std::move(state).finish();
}

template <problem P>
typename P::solution_type construct(const P& instance, const rcl_config& cfg, random_stream& rng) {
  return construct(instance, cfg, rng, [](auto&&...) {});
}

}  // namespace grasppr
