#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "problem.hpp"

namespace grasppr {

// Linear ordering: maximize the sum of c[a][b] over pairs where a precedes b.

struct lop_move {
  neighborhood kind = neighborhood::insert;
  int element = 0;  // insert: the moved element; swap: the element at `from`
  int from = 0;     // positions
  int to = 0;
  objective_t delta = 0;

  friend bool operator==(const lop_move&, const lop_move&) = default;
};

class lop_instance {
public:
  using solution_type = permutation_solution;
  using move_type = lop_move;
  class state;
  class construction;

  // Canonical scan order, no randomized offset.
  static constexpr bool randomized_first_scan = false;

  lop_instance(int n, std::vector<objective_t> cost, std::string name = {})
      : n_(n), cost_(std::move(cost)), name_(std::move(name)) {
    if (n < 1) throw std::invalid_argument("lop_instance: n must be positive");
    if (cost_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
      throw std::invalid_argument("lop_instance: matrix must have n*n entries");
    for (objective_t c : cost_)
      if (c < std::numeric_limits<std::int32_t>::min() || c > std::numeric_limits<std::int32_t>::max())
        throw std::out_of_range("lop_instance: entry does not fit 32-bit signed");
  }

  [[nodiscard]] int size() const noexcept { return n_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] objective_t cost(int i, int j) const noexcept {
    return cost_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)];
  }
  [[nodiscard]] std::span<const objective_t> matrix() const noexcept { return cost_; }

  /// Sum of c[a][b] + c[b][a] over all unordered pairs; diagonal excluded.
  [[nodiscard]] objective_t total_off_diagonal() const noexcept {
    objective_t total = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (i != j) total += cost(i, j);
    return total;
  }

  [[nodiscard]] objective_t evaluate(const permutation_solution& s) const {
    if (s.size() != n_) throw dimension_error("lop: solution size does not match instance");
    return evaluate(s.order());
  }

  [[nodiscard]] objective_t evaluate(std::span<const int> order) const noexcept {
    objective_t total = 0;
    for (std::size_t a = 0; a < order.size(); ++a)
      for (std::size_t b = a + 1; b < order.size(); ++b) total += cost(order[a], order[b]);
    return total;
  }

  [[nodiscard]] int default_diversity_threshold() const noexcept { return std::max(1, (5 * n_ + 99) / 100); }

  [[nodiscard]] state make_state(permutation_solution s) const;
  [[nodiscard]] construction start_construction() const;

  /// Objective change of moving the element at position `from` to position `to`.
  [[nodiscard]] objective_t insert_delta(std::span<const int> order, int from, int to) const noexcept {
    const int e = order[static_cast<std::size_t>(from)];
    objective_t delta = 0;
    if (from < to) {
      for (int q = from + 1; q <= to; ++q) {
        const int u = order[static_cast<std::size_t>(q)];
        delta += cost(u, e) - cost(e, u);
      }
    } else {
      for (int q = to; q < from; ++q) {
        const int u = order[static_cast<std::size_t>(q)];
        delta += cost(e, u) - cost(u, e);
      }
    }
    return delta;
  }

  /// Objective change of exchanging the elements at positions i and j.
  [[nodiscard]] objective_t swap_delta(std::span<const int> order, int i, int j) const noexcept {
    if (i == j) return 0;
    if (j < i) std::swap(i, j);
    const int a = order[static_cast<std::size_t>(i)];
    const int b = order[static_cast<std::size_t>(j)];
    objective_t delta = cost(b, a) - cost(a, b);
    for (int q = i + 1; q < j; ++q) {
      const int m = order[static_cast<std::size_t>(q)];
      delta += cost(m, a) - cost(a, m) + cost(b, m) - cost(m, b);
    }
    return delta;
  }

private:
  int n_;
  std::vector<objective_t> cost_;
  std::string name_;
};

namespace detail {

// Change in the number of positions matching `guide` when the element at
// `from` is inserted at `to`. Positive means more positions match.
inline int insert_match_gain(std::span<const int> cur, std::span<const int> guide, int from, int to) {
  const int e = cur[static_cast<std::size_t>(from)];
  auto at = [](std::span<const int> v, int i) { return v[static_cast<std::size_t>(i)]; };
  int before = 0, after = 0;
  const int lo = std::min(from, to), hi = std::max(from, to);
  for (int r = lo; r <= hi; ++r) before += at(cur, r) == at(guide, r);
  if (from < to) {
    for (int r = from; r < to; ++r) after += at(cur, r + 1) == at(guide, r);
    after += e == at(guide, to);
  } else {
    after += e == at(guide, to);
    for (int r = to + 1; r <= from; ++r) after += at(cur, r - 1) == at(guide, r);
  }
  return after - before;
}

inline int swap_match_gain(std::span<const int> cur, std::span<const int> guide, int i, int j) {
  auto at = [](std::span<const int> v, int k) { return v[static_cast<std::size_t>(k)]; };
  const int before = (at(cur, i) == at(guide, i)) + (at(cur, j) == at(guide, j));
  const int after = (at(cur, j) == at(guide, i)) + (at(cur, i) == at(guide, j));
  return after - before;
}

}  // namespace detail

/// Mutable search/relink state: the order, element positions and objective.
class lop_instance::state {
public:
  state(const lop_instance& inst, permutation_solution s) : inst_(&inst), sol_(std::move(s)) {
    if (sol_.size() != inst.size()) throw dimension_error("lop: solution size does not match instance");
    value_ = objective_of(inst, sol_);
    sol_.set_objective(value_);
    pos_ = sol_.positions();
  }

  [[nodiscard]] const permutation_solution& solution() const noexcept { return sol_; }
  [[nodiscard]] objective_t objective() const noexcept { return value_; }
  [[nodiscard]] std::size_t scan_extent() const noexcept { return static_cast<std::size_t>(sol_.size()); }
  [[nodiscard]] int position_of(int element) const { return pos_[static_cast<std::size_t>(element)]; }

  /// Visits the neighborhood in (element ascending, target position
  /// ascending) order. `visit` returns true to stop; scan then returns true.
  template <class Visit>
  bool scan(neighborhood kind, std::size_t /*offset*/, Visit&& visit) {
    const int n = sol_.size();
    const auto order = sol_.order();
    if (kind == neighborhood::insert) {
      buf_.assign(static_cast<std::size_t>(n), 0);
      for (int e = 0; e < n; ++e) {
        const int p = pos_[static_cast<std::size_t>(e)];
        objective_t d = 0;
        for (int q = p - 1; q >= 0; --q) {
          const int u = order[static_cast<std::size_t>(q)];
          d += inst_->cost(e, u) - inst_->cost(u, e);
          buf_[static_cast<std::size_t>(q)] = d;
        }
        d = 0;
        for (int q = p + 1; q < n; ++q) {
          const int u = order[static_cast<std::size_t>(q)];
          d += inst_->cost(u, e) - inst_->cost(e, u);
          buf_[static_cast<std::size_t>(q)] = d;
        }
        for (int q = 0; q < n; ++q) {
          if (q == p) continue;
          if (visit(lop_move{neighborhood::insert, e, p, q, buf_[static_cast<std::size_t>(q)]})) return true;
        }
      }
      return false;
    }
    // swap: each unordered pair once, reported from its smaller element
    for (int e = 0; e < n; ++e) {
      const int p = pos_[static_cast<std::size_t>(e)];
      for (int q = 0; q < n; ++q) {
        if (q == p || order[static_cast<std::size_t>(q)] < e) continue;
        if (visit(lop_move{neighborhood::swap, e, p, q, inst_->swap_delta(order, p, q)})) return true;
      }
    }
    return false;
  }

  void apply(const lop_move& m) {
    if (m.kind == neighborhood::insert)
      sol_.insert(m.from, m.to);
    else
      sol_.swap_positions(m.from, m.to);
    value_ += m.delta;
    sol_.set_objective(value_);
    const auto order = sol_.order();
    const int lo = std::min(m.from, m.to), hi = std::max(m.from, m.to);
    for (int r = lo; r <= hi; ++r) pos_[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r;
  }

  /// Steps toward `guide` that strictly reduce the position-wise distance.
  /// Insert mode moves a misplaced element into its guide position; when no
  /// insertion reduces the distance (for example two misplaced elements that
  /// are not adjacent) the swap-into-position steps are offered instead,
  /// which always reduce it.
  void relink_moves(const permutation_solution& guide, neighborhood mode,
                    std::vector<scored_move<lop_move>>& out) const {
    out.clear();
    if (guide.size() != sol_.size()) throw dimension_error("lop relink: size mismatch");
    const auto cur = sol_.order();
    const auto g = guide.order();
    const int n = sol_.size();
    const int dist = grasppr::distance(sol_, guide);
    const auto gpos = guide.positions();
    if (mode == neighborhood::insert) {
      for (int e = 0; e < n; ++e) {
        const int from = pos_[static_cast<std::size_t>(e)], to = gpos[static_cast<std::size_t>(e)];
        if (from == to) continue;
        const int gain = detail::insert_match_gain(cur, g, from, to);
        if (gain <= 0) continue;
        const objective_t d = inst_->insert_delta(cur, from, to);
        out.push_back({lop_move{neighborhood::insert, e, from, to, d}, d, e, dist - gain});
      }
      if (!out.empty()) return;
    }
    for (int e = 0; e < n; ++e) {
      const int from = pos_[static_cast<std::size_t>(e)], to = gpos[static_cast<std::size_t>(e)];
      if (from == to) continue;
      const int gain = detail::swap_match_gain(cur, g, from, to);
      const objective_t d = inst_->swap_delta(cur, from, to);
      out.push_back({lop_move{neighborhood::swap, e, from, to, d}, d, e, dist - gain});
    }
  }

  /// Attributes are (element, position) pairs of the guides that the current
  /// order lacks; frequency counts the guides holding each attribute.
  void multi_parent_moves(std::span<const permutation_solution> guides,
                          std::vector<scored_move<lop_move>>& out) const {
    out.clear();
    const int n = sol_.size();
    std::map<std::pair<int, int>, int> freq;  // (element, position) -> count
    for (const auto& g : guides) {
      if (g.size() != n) throw dimension_error("lop multi-parent: size mismatch");
      for (int p = 0; p < n; ++p)
        if (g[p] != sol_[p]) ++freq[{g[p], p}];
    }
    const auto cur = sol_.order();
    for (const auto& [attr, count] : freq) {
      const auto [e, to] = attr;
      const int from = pos_[static_cast<std::size_t>(e)];
      const objective_t d = inst_->insert_delta(cur, from, to);
      out.push_back({lop_move{neighborhood::insert, e, from, to, d}, d, e, -1, count});
    }
  }

private:
  const lop_instance* inst_;
  permutation_solution sol_;
  std::vector<int> pos_;
  objective_t value_ = 0;
  std::vector<objective_t> buf_;
};

/// Appends one element at a time to the end of a partial order. The
/// attractiveness of v is the sum of c[u][v] over the already placed u.
class lop_instance::construction {
public:
  explicit construction(const lop_instance& inst)
      : inst_(&inst), placed_(static_cast<std::size_t>(inst.size()), 0), gain_(static_cast<std::size_t>(inst.size()), 0) {
    order_.reserve(static_cast<std::size_t>(inst.size()));
  }

  [[nodiscard]] bool complete() const noexcept { return static_cast<int>(order_.size()) == inst_->size(); }
  [[nodiscard]] std::span<const int> partial() const noexcept { return order_; }
  [[nodiscard]] objective_t value() const noexcept { return value_; }

  void candidates(std::vector<candidate>& out) const {
    out.clear();
    for (int v = 0; v < inst_->size(); ++v)
      if (!placed_[static_cast<std::size_t>(v)]) out.push_back({v, gain_[static_cast<std::size_t>(v)]});
  }

  void add(int v) {
    if (v < 0 || v >= inst_->size() || placed_[static_cast<std::size_t>(v)])
      throw std::invalid_argument("lop construction: element already placed or out of range");
    placed_[static_cast<std::size_t>(v)] = 1;
    value_ += gain_[static_cast<std::size_t>(v)];
    order_.push_back(v);
    for (int u = 0; u < inst_->size(); ++u)
      if (!placed_[static_cast<std::size_t>(u)]) gain_[static_cast<std::size_t>(u)] += inst_->cost(v, u);
  }

  [[nodiscard]] permutation_solution finish() && {
    if (!complete()) throw std::logic_error("lop construction: incomplete order");
    permutation_solution s(std::move(order_));
    s.set_objective(value_);
    return s;
  }

private:
  const lop_instance* inst_;
  std::vector<int> order_;
  std::vector<char> placed_;
  std::vector<objective_t> gain_;
  objective_t value_ = 0;
};

inline lop_instance::state lop_instance::make_state(permutation_solution s) const { return state(*this, std::move(s)); }
inline lop_instance::construction lop_instance::start_construction() const { return construction(*this); }

// ---------------------------------------------------------------------------
// Free-function surface
// ---------------------------------------------------------------------------

inline objective_t lop_objective(const lop_instance& inst, const permutation_solution& s) { return inst.evaluate(s); }

/// Gain of appending v to `partial`: the sum of c[u][v] over placed u.
inline objective_t lop_attractiveness(const lop_instance& inst, std::span<const int> partial, int v) {
  if (v < 0 || v >= inst.size()) throw std::out_of_range("lop_attractiveness: vertex out of range");
  objective_t g = 0;
  for (int u : partial) {
    if (u == v) throw std::invalid_argument("lop_attractiveness: vertex already placed");
    g += inst.cost(u, v);
  }
  return g;
}

inline objective_t lop_insert_delta(const lop_instance& inst, const permutation_solution& s, int element, int to_pos) {
  if (element < 0 || element >= s.size()) throw std::out_of_range("lop_insert_delta: element out of range");
  if (to_pos < 0 || to_pos >= s.size()) throw std::out_of_range("lop_insert_delta: position out of range");
  const auto order = s.order();
  const int from = static_cast<int>(std::find(order.begin(), order.end(), element) - order.begin());
  return inst.insert_delta(order, from, to_pos);
}

inline objective_t lop_swap_delta(const lop_instance& inst, const permutation_solution& s, int i, int j) {
  if (i < 0 || j < 0 || i >= s.size() || j >= s.size()) throw std::out_of_range("lop_swap_delta: position out of range");
  return inst.swap_delta(s.order(), i, j);
}

inline std::vector<scored_move<lop_move>> lop_pr_candidates(const lop_instance& inst, const permutation_solution& current,
                                                            const permutation_solution& guiding,
                                                            neighborhood mode = neighborhood::insert) {
  if (current == guiding) throw std::invalid_argument("lop_pr_candidates: current equals guiding");
  std::vector<scored_move<lop_move>> out;
  inst.make_state(current).relink_moves(guiding, mode, out);
  return out;
}

}  // namespace grasppr
