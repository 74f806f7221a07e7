#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "core.hpp"

namespace grasppr {

enum class guide_policy { uniform, proportional_delta };

enum class admission_outcome { added, rejected_quality, rejected_duplicate, rejected_diversity };

template <class Solution>
struct admission {
  admission_outcome outcome = admission_outcome::rejected_quality;
  std::vector<Solution> evicted;

  [[nodiscard]] bool added() const noexcept { return outcome == admission_outcome::added; }
};

/// Fixed-capacity pool of high-quality, mutually different solutions.
///
/// While filling up, a candidate enters only if it is at least
/// `diversity_threshold` away from every member. A candidate that is too
/// close to some members but strictly better than all of them replaces them.
/// Once full, a candidate must beat the worst member and differ from every
/// member; it then replaces the most similar member among those it beats
/// (ties: worse objective first, then lower index).
template <class Solution>
class elite_set {
public:
  struct member {
    Solution solution;
    objective_t objective;
    std::uint64_t id;
  };

  explicit elite_set(std::size_t capacity = 10, int diversity_threshold = 1)
      : capacity_(capacity), threshold_(diversity_threshold) {
    if (capacity == 0) throw std::invalid_argument("elite_set: capacity must be positive");
    if (diversity_threshold < 0) throw std::invalid_argument("elite_set: diversity threshold must be >= 0");
  }

  [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
  [[nodiscard]] int diversity_threshold() const noexcept { return threshold_; }
  [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
  [[nodiscard]] bool empty() const noexcept { return members_.empty(); }
  [[nodiscard]] bool full() const noexcept { return members_.size() >= capacity_; }
  [[nodiscard]] const std::vector<member>& members() const noexcept { return members_; }
  [[nodiscard]] const member& operator[](std::size_t i) const { return members_[i]; }

  [[nodiscard]] std::size_t best_index() const { return extreme(true); }
  [[nodiscard]] std::size_t worst_index() const { return extreme(false); }

  void clear() {
    members_.clear();
    relinked_.clear();
  }

  admission<Solution> try_add(const Solution& s, objective_t f) {
    admission<Solution> out;
    if (members_.empty()) {
      push(s, f);
      out.outcome = admission_outcome::added;
      return out;
    }
    std::vector<int> dist(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i) dist[i] = grasppr::distance(s, members_[i].solution);

    if (!full()) {
      std::vector<std::size_t> close;
      for (std::size_t i = 0; i < members_.size(); ++i)
        if (dist[i] < threshold_ || dist[i] == 0) close.push_back(i);
      if (close.empty()) {
        push(s, f);
        out.outcome = admission_outcome::added;
        return out;
      }
      for (std::size_t i : close) {
        if (dist[i] == 0) {
          out.outcome = admission_outcome::rejected_duplicate;
          return out;
        }
        if (members_[i].objective >= f) {
          out.outcome = admission_outcome::rejected_diversity;
          return out;
        }
      }
      // strictly better than every near-duplicate: they make room for it
      for (auto it = close.rbegin(); it != close.rend(); ++it) {
        out.evicted.push_back(members_[*it].solution);
        drop(*it);
      }
      push(s, f);
      out.outcome = admission_outcome::added;
      return out;
    }

    if (f <= members_[worst_index()].objective) {
      out.outcome = admission_outcome::rejected_quality;
      return out;
    }
    for (int d : dist) {
      if (d == 0) {
        out.outcome = admission_outcome::rejected_duplicate;
        return out;
      }
    }
    std::optional<std::size_t> victim;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (members_[i].objective >= f) continue;
      if (!victim || dist[i] < dist[*victim] ||
          (dist[i] == dist[*victim] && members_[i].objective < members_[*victim].objective))
        victim = i;
    }
    out.evicted.push_back(members_[*victim].solution);
    replace(*victim, s, f);
    out.outcome = admission_outcome::added;
    return out;
  }

  /// nullopt when every member is identical to `s` under the proportional policy.
  std::optional<Solution> select_guide(const Solution& s, guide_policy policy, random_stream& rng) const {
    if (members_.empty()) throw std::logic_error("select_guide: elite set is empty");
    if (policy == guide_policy::uniform) {
      if (members_.size() == 1) return members_.front().solution;
      return members_[rng.index(members_.size())].solution;
    }
    std::vector<std::uint64_t> weight(members_.size());
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      weight[i] = static_cast<std::uint64_t>(grasppr::distance(s, members_[i].solution));
      total += weight[i];
    }
    if (total == 0) return std::nullopt;
    std::uint64_t r = rng.below(total);
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (r < weight[i]) return members_[i].solution;
      r -= weight[i];
    }
    return members_.back().solution;
  }

  /// Next member pair (by index order) not yet relinked; marks it relinked.
  std::optional<std::pair<Solution, Solution>> next_unrelinked_pair() {
    for (std::size_t i = 0; i < members_.size(); ++i)
      for (std::size_t j = i + 1; j < members_.size(); ++j)
        if (relinked_.insert(key(members_[i].id, members_[j].id)).second)
          return std::pair{members_[i].solution, members_[j].solution};
    return std::nullopt;
  }

  [[nodiscard]] std::size_t unrelinked_pair_count() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < members_.size(); ++i)
      for (std::size_t j = i + 1; j < members_.size(); ++j) count += !relinked_.contains(key(members_[i].id, members_[j].id));
    return count;
  }

  /// One member per line: objective, then the solution.
  void dump(std::ostream& os) const {
    for (const auto& m : members_) os << m.objective << ' ' << to_text(m.solution) << '\n';
  }

private:
  static std::pair<std::uint64_t, std::uint64_t> key(std::uint64_t a, std::uint64_t b) { return {std::min(a, b), std::max(a, b)}; }

  std::size_t extreme(bool best) const {
    if (members_.empty()) throw std::logic_error("elite_set: empty");
    std::size_t k = 0;
    for (std::size_t i = 1; i < members_.size(); ++i)
      if (best ? members_[i].objective > members_[k].objective : members_[i].objective < members_[k].objective) k = i;
    return k;
  }

  void push(const Solution& s, objective_t f) {
    members_.push_back({s, f, next_id_++});
    members_.back().solution.set_objective(f);
  }

  void replace(std::size_t i, const Solution& s, objective_t f) {
    forget(members_[i].id);
    members_[i] = {s, f, next_id_++};
    members_[i].solution.set_objective(f);
  }

  void drop(std::size_t i) {
    forget(members_[i].id);
    members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(i));
  }

  void forget(std::uint64_t id) {
    std::erase_if(relinked_, [id](const auto& p) { return p.first == id || p.second == id; });
  }

  std::size_t capacity_;
  int threshold_;
  std::vector<member> members_;
  std::set<std::pair<std::uint64_t, std::uint64_t>> relinked_;
  std::uint64_t next_id_ = 0;
};

}  // namespace grasppr
