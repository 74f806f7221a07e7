#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "problem.hpp"

namespace grasppr {

struct weighted_edge {
  int u;
  int v;
  objective_t w;

  friend bool operator==(const weighted_edge&, const weighted_edge&) = default;
};

struct adjacent {
  int vertex;
  objective_t w;
};

/// Transfer (`kind == insert`) flips `u`; swap flips `u` (on S) and `v` (on S-bar).
struct maxcut_move {
  neighborhood kind = neighborhood::insert;
  int u = 0;
  int v = -1;
  objective_t delta = 0;

  friend bool operator==(const maxcut_move&, const maxcut_move&) = default;
};

class maxcut_instance {
public:
  using solution_type = partition_solution;
  using move_type = maxcut_move;
  class state;
  class construction;

  // First-improving passes start at a random vertex.
  static constexpr bool randomized_first_scan = true;

  /// Duplicate edges in either orientation are merged by summing weights.
  maxcut_instance(int n, std::vector<weighted_edge> edges, std::string name = {}) : n_(n), name_(std::move(name)) {
    if (n < 1) throw std::invalid_argument("maxcut_instance: n must be positive");
    std::map<std::pair<int, int>, objective_t> merged;
    for (const auto& e : edges) {
      if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) throw std::out_of_range("maxcut_instance: vertex id out of range");
      if (e.u == e.v) throw std::invalid_argument("maxcut_instance: self-loop on vertex " + std::to_string(e.u));
      merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.w;
    }
    edges_.reserve(merged.size());
    for (const auto& [key, w] : merged) edges_.push_back({key.first, key.second, w});

    std::vector<std::size_t> degree(static_cast<std::size_t>(n), 0);
    for (const auto& e : edges_) {
      ++degree[static_cast<std::size_t>(e.u)];
      ++degree[static_cast<std::size_t>(e.v)];
    }
    offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int v = 0; v < n; ++v) offsets_[static_cast<std::size_t>(v) + 1] = offsets_[static_cast<std::size_t>(v)] + degree[static_cast<std::size_t>(v)];
    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
      adjacency_[fill[static_cast<std::size_t>(e.u)]++] = {e.v, e.w};
      adjacency_[fill[static_cast<std::size_t>(e.v)]++] = {e.u, e.w};
    }
    for (int v = 0; v < n; ++v) {
      auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[static_cast<std::size_t>(v)]);
      auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[static_cast<std::size_t>(v) + 1]);
      std::sort(first, last, [](const adjacent& a, const adjacent& b) { return a.vertex < b.vertex; });
    }
  }

  [[nodiscard]] int size() const noexcept { return n_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] std::span<const weighted_edge> edges() const noexcept { return edges_; }

  [[nodiscard]] std::span<const adjacent> neighbors(int v) const noexcept {
    return std::span<const adjacent>(adjacency_).subspan(offsets_[static_cast<std::size_t>(v)],
                                                         offsets_[static_cast<std::size_t>(v) + 1] - offsets_[static_cast<std::size_t>(v)]);
  }

  [[nodiscard]] objective_t weighted_degree(int v) const noexcept {
    objective_t total = 0;
    for (const auto& a : neighbors(v)) total += a.w;
    return total;
  }

  /// Weight of edge {u, v}, 0 when absent.
  [[nodiscard]] objective_t weight(int u, int v) const noexcept {
    const auto adj = neighbors(u);
    auto it = std::lower_bound(adj.begin(), adj.end(), v, [](const adjacent& a, int x) { return a.vertex < x; });
    return it != adj.end() && it->vertex == v ? it->w : 0;
  }

  [[nodiscard]] objective_t evaluate(const partition_solution& s) const {
    if (s.size() != n_) throw dimension_error("maxcut: partition size does not match instance");
    objective_t cut = 0;
    for (const auto& e : edges_)
      if (s[e.u] != s[e.v]) cut += e.w;
    return cut;
  }

  [[nodiscard]] int default_diversity_threshold() const noexcept { return std::max(1, (5 * n_ + 99) / 100); }

  [[nodiscard]] state make_state(partition_solution s) const;
  [[nodiscard]] construction start_construction() const;

private:
  int n_;
  std::string name_;
  std::vector<weighted_edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<adjacent> adjacency_;
};

/// gain[v] = cut change if v switches sides
///         = sum of w(u,v) over same-side u minus sum over other-side u.
class gain_table {
public:
  gain_table() = default;

  gain_table(const maxcut_instance& inst, const partition_solution& part) : gain_(static_cast<std::size_t>(inst.size()), 0) {
    for (int v = 0; v < inst.size(); ++v) gain_[static_cast<std::size_t>(v)] = recompute(inst, part, v);
  }

  static objective_t recompute(const maxcut_instance& inst, const partition_solution& part, int v) {
    objective_t g = 0;
    for (const auto& a : inst.neighbors(v)) g += part[a.vertex] == part[v] ? a.w : -a.w;
    return g;
  }

  [[nodiscard]] objective_t operator[](int v) const { return gain_[static_cast<std::size_t>(v)]; }
  [[nodiscard]] std::span<const objective_t> values() const noexcept { return gain_; }
  [[nodiscard]] std::size_t size() const noexcept { return gain_.size(); }

  /// Flips v in `part` and updates the gains of v and its neighbors.
  void apply_flip(const maxcut_instance& inst, partition_solution& part, int v) {
    const bool side = part[v];
    for (const auto& a : inst.neighbors(v)) {
      // neighbor on v's old side loses a same-side edge, gains an other-side one
      gain_[static_cast<std::size_t>(a.vertex)] += part[a.vertex] == side ? -2 * a.w : 2 * a.w;
    }
    gain_[static_cast<std::size_t>(v)] = -gain_[static_cast<std::size_t>(v)];
    part.flip(v);
  }

  [[nodiscard]] bool consistent_with(const maxcut_instance& inst, const partition_solution& part) const {
    if (gain_.size() != static_cast<std::size_t>(inst.size())) return false;
    for (int v = 0; v < inst.size(); ++v)
      if (gain_[static_cast<std::size_t>(v)] != recompute(inst, part, v)) return false;
    return true;
  }

  friend bool operator==(const gain_table&, const gain_table&) = default;

private:
  std::vector<objective_t> gain_;
};

class maxcut_instance::state {
public:
  state(const maxcut_instance& inst, partition_solution s) : inst_(&inst), sol_(std::move(s)) {
    if (sol_.size() != inst.size()) throw dimension_error("maxcut: partition size does not match instance");
    value_ = objective_of(inst, sol_);
    sol_.set_objective(value_);
    gains_ = gain_table(inst, sol_);
  }

  [[nodiscard]] const partition_solution& solution() const noexcept { return sol_; }
  [[nodiscard]] objective_t objective() const noexcept { return value_; }
  [[nodiscard]] const gain_table& gains() const noexcept { return gains_; }
  [[nodiscard]] std::size_t scan_extent() const noexcept { return static_cast<std::size_t>(sol_.size()); }

  /// Transfers are visited in vertex order starting at `offset` (wrapping);
  /// swaps pair each S vertex, in the same rotated order, with S-bar vertices
  /// in ascending order.
  template <class Visit>
  bool scan(neighborhood kind, std::size_t offset, Visit&& visit) {
    const int n = sol_.size();
    const int start = n == 0 ? 0 : static_cast<int>(offset % static_cast<std::size_t>(n));
    if (kind == neighborhood::insert) {
      for (int k = 0; k < n; ++k) {
        const int v = (start + k) % n;
        if (visit(maxcut_move{neighborhood::insert, v, -1, gains_[v]})) return true;
      }
      return false;
    }
    for (int k = 0; k < n; ++k) {
      const int u = (start + k) % n;
      if (!sol_[u]) continue;
      for (int v = 0; v < n; ++v) {
        if (sol_[v]) continue;
        const objective_t d = gains_[u] + gains_[v] + 2 * inst_->weight(u, v);
        if (visit(maxcut_move{neighborhood::swap, u, v, d})) return true;
      }
    }
    return false;
  }

  void apply(const maxcut_move& m) {
    gains_.apply_flip(*inst_, sol_, m.u);
    if (m.kind == neighborhood::swap) gains_.apply_flip(*inst_, sol_, m.v);
    value_ += m.delta;
    sol_.set_objective(value_);
  }

  void flip(int v) { apply(maxcut_move{neighborhood::insert, v, -1, gains_[v]}); }

  /// One flip per differing position; each reduces the distance by exactly one.
  void relink_moves(const partition_solution& guide, neighborhood /*mode*/,
                    std::vector<scored_move<maxcut_move>>& out) const {
    out.clear();
    if (guide.size() != sol_.size()) throw dimension_error("maxcut relink: size mismatch");
    const int dist = grasppr::distance(sol_, guide);
    for (int j = 0; j < sol_.size(); ++j)
      if (sol_[j] != guide[j]) out.push_back({maxcut_move{neighborhood::insert, j, -1, gains_[j]}, gains_[j], j, dist - 1});
  }

  /// One flip per position shared with `guide`; each moves one step further away.
  void exterior_moves(const partition_solution& guide, std::vector<scored_move<maxcut_move>>& out) const {
    out.clear();
    if (guide.size() != sol_.size()) throw dimension_error("maxcut exterior relink: size mismatch");
    const int dist = grasppr::distance(sol_, guide);
    for (int j = 0; j < sol_.size(); ++j)
      if (sol_[j] == guide[j]) out.push_back({maxcut_move{neighborhood::insert, j, -1, gains_[j]}, gains_[j], j, dist + 1});
  }

  /// Attribute j is "guide side of vertex j"; frequency counts guides that
  /// disagree with the current side of j.
  void multi_parent_moves(std::span<const partition_solution> guides, std::vector<scored_move<maxcut_move>>& out) const {
    out.clear();
    const int n = sol_.size();
    std::vector<int> freq(static_cast<std::size_t>(n), 0);
    for (const auto& g : guides) {
      if (g.size() != n) throw dimension_error("maxcut multi-parent: size mismatch");
      for (int j = 0; j < n; ++j) freq[static_cast<std::size_t>(j)] += g[j] != sol_[j];
    }
    for (int j = 0; j < n; ++j)
      if (freq[static_cast<std::size_t>(j)] > 0)
        out.push_back({maxcut_move{neighborhood::insert, j, -1, gains_[j]}, gains_[j], j, -1, freq[static_cast<std::size_t>(j)]});
  }

private:
  const maxcut_instance* inst_;
  partition_solution sol_;
  gain_table gains_;
  objective_t value_ = 0;
};

/// Assigns vertices one at a time. Candidates are (vertex, side) placements
/// with id 2*v + side; g is the weight to already-assigned vertices on the
/// opposite side. The vertex of largest weighted degree (lowest id on ties)
/// starts on the S side.
class maxcut_instance::construction {
public:
  explicit construction(const maxcut_instance& inst)
      : inst_(&inst),
        side_(static_cast<std::size_t>(inst.size()), -1),
        to_s_(static_cast<std::size_t>(inst.size()), 0),
        to_sbar_(static_cast<std::size_t>(inst.size()), 0) {
    int first = 0;
    objective_t best = inst.weighted_degree(0);
    for (int v = 1; v < inst.size(); ++v) {
      const objective_t d = inst.weighted_degree(v);
      if (d > best) best = d, first = v;
    }
    add(2 * first + 1);
  }

  static constexpr int candidate_id(int v, bool side) noexcept { return 2 * v + (side ? 1 : 0); }

  [[nodiscard]] bool complete() const noexcept { return assigned_ == inst_->size(); }
  [[nodiscard]] objective_t value() const noexcept { return value_; }
  [[nodiscard]] std::span<const std::int8_t> assignment() const noexcept { return side_; }

  void candidates(std::vector<candidate>& out) const {
    out.clear();
    for (int v = 0; v < inst_->size(); ++v) {
      if (side_[static_cast<std::size_t>(v)] >= 0) continue;
      out.push_back({candidate_id(v, false), to_s_[static_cast<std::size_t>(v)]});
      out.push_back({candidate_id(v, true), to_sbar_[static_cast<std::size_t>(v)]});
    }
  }

  void add(int id) {
    const int v = id / 2;
    const bool side = (id % 2) == 1;
    if (id < 0 || v >= inst_->size() || side_[static_cast<std::size_t>(v)] >= 0)
      throw std::invalid_argument("maxcut construction: vertex already assigned or out of range");
    value_ += side ? to_sbar_[static_cast<std::size_t>(v)] : to_s_[static_cast<std::size_t>(v)];
    side_[static_cast<std::size_t>(v)] = side ? 1 : 0;
    ++assigned_;
    for (const auto& a : inst_->neighbors(v)) (side ? to_s_ : to_sbar_)[static_cast<std::size_t>(a.vertex)] += a.w;
  }

  [[nodiscard]] partition_solution finish() && {
    if (!complete()) throw std::logic_error("maxcut construction: incomplete assignment");
    std::vector<std::uint8_t> bits(side_.begin(), side_.end());
    partition_solution s(std::move(bits));
    s.set_objective(value_);
    return s;
  }

private:
  const maxcut_instance* inst_;
  std::vector<std::int8_t> side_;  // -1 unassigned, 0 S-bar, 1 S
  std::vector<objective_t> to_s_, to_sbar_;
  int assigned_ = 0;
  objective_t value_ = 0;
};

inline maxcut_instance::state maxcut_instance::make_state(partition_solution s) const { return state(*this, std::move(s)); }
inline maxcut_instance::construction maxcut_instance::start_construction() const { return construction(*this); }

// ---------------------------------------------------------------------------
// Free-function surface
// ---------------------------------------------------------------------------

inline objective_t cut_value(const maxcut_instance& inst, const partition_solution& part) { return inst.evaluate(part); }

/// `assignment[u]` is -1 (unassigned), 0 (S-bar) or 1 (S). Returns the cut
/// weight gained by placing v on `side`.
inline objective_t maxcut_attractiveness(const maxcut_instance& inst, std::span<const std::int8_t> assignment, int v, bool side) {
  if (v < 0 || v >= inst.size()) throw std::out_of_range("maxcut_attractiveness: vertex out of range");
  if (assignment[static_cast<std::size_t>(v)] >= 0) throw std::invalid_argument("maxcut_attractiveness: vertex already assigned");
  const std::int8_t opposite = side ? 0 : 1;
  objective_t g = 0;
  for (const auto& a : inst.neighbors(v))
    if (assignment[static_cast<std::size_t>(a.vertex)] == opposite) g += a.w;
  return g;
}

inline objective_t flip_delta(const maxcut_instance& inst, const partition_solution& part, const gain_table& gains, int v) {
  if (v < 0 || v >= inst.size()) throw std::out_of_range("flip_delta: vertex out of range");
#ifndef NDEBUG
  if (gains.size() != static_cast<std::size_t>(inst.size()) || gains[v] != gain_table::recompute(inst, part, v))
    throw std::logic_error("flip_delta: stale gain table");
#else
  (void)part;
#endif
  return gains[v];
}

inline void apply_flip(const maxcut_instance& inst, partition_solution& part, gain_table& gains, int v) {
  gains.apply_flip(inst, part, v);
}

inline std::vector<scored_move<maxcut_move>> maxcut_pr_candidates(const maxcut_instance& inst, const partition_solution& current,
                                                                  const partition_solution& guiding) {
  if (current == guiding) throw std::invalid_argument("maxcut_pr_candidates: current equals guiding");
  std::vector<scored_move<maxcut_move>> out;
  inst.make_state(current).relink_moves(guiding, neighborhood::insert, out);
  return out;
}

}  // namespace grasppr
