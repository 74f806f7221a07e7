#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace grasppr {

// All bundled problems are maximization over integer weights.
using objective_t = std::int64_t;

inline constexpr objective_t minus_infinity = std::numeric_limits<objective_t>::min();

class dimension_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Solution representations
// ---------------------------------------------------------------------------

/// Linear order of the vertices 0..n-1.
class permutation_solution {
public:
  permutation_solution() = default;

  explicit permutation_solution(std::vector<int> order) : order_(std::move(order)) {
    if (!is_permutation(order_)) throw std::invalid_argument("order is not a permutation of 0..n-1");
  }

  static permutation_solution identity(int n) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    return permutation_solution(std::move(order));
  }

  [[nodiscard]] int size() const noexcept { return static_cast<int>(order_.size()); }
  [[nodiscard]] std::span<const int> order() const noexcept { return order_; }
  [[nodiscard]] int operator[](int pos) const { return order_[static_cast<std::size_t>(pos)]; }

  [[nodiscard]] std::vector<int> positions() const {
    std::vector<int> pos(order_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) pos[static_cast<std::size_t>(order_[i])] = static_cast<int>(i);
    return pos;
  }

  [[nodiscard]] std::optional<objective_t> cached_objective() const noexcept { return objective_; }
  void set_objective(objective_t value) noexcept { objective_ = value; }
  void invalidate() noexcept { objective_.reset(); }

  /// Move the element at position `from` to position `to`, shifting the rest.
  /// Mutators drop the cached objective; callers holding a delta re-set it.
  void insert(int from, int to) {
    objective_.reset();
    auto first = order_.begin();
    if (from < to)
      std::rotate(first + from, first + from + 1, first + to + 1);
    else if (to < from)
      std::rotate(first + to, first + from, first + from + 1);
  }

  void swap_positions(int i, int j) {
    objective_.reset();
    std::swap(order_[static_cast<std::size_t>(i)], order_[static_cast<std::size_t>(j)]);
  }

  friend bool operator==(const permutation_solution& a, const permutation_solution& b) noexcept {
    return a.order_ == b.order_;
  }

  static bool is_permutation(std::span<const int> order) {
    std::vector<char> seen(order.size(), 0);
    for (int v : order) {
      if (v < 0 || static_cast<std::size_t>(v) >= order.size() || seen[static_cast<std::size_t>(v)]) return false;
      seen[static_cast<std::size_t>(v)] = 1;
    }
    return true;
  }

private:
  std::vector<int> order_;
  std::optional<objective_t> objective_;
};

/// Two-sided vertex partition; bit j set means vertex j is on the S side.
class partition_solution {
public:
  partition_solution() = default;
  explicit partition_solution(int n) : bits_(static_cast<std::size_t>(n), 0) {}
  explicit partition_solution(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) b = b ? 1 : 0;
  }

  /// Parses "0011"-style strings; position j is character j.
  static partition_solution from_string(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
      if (c != '0' && c != '1') throw std::invalid_argument("partition string must contain only 0/1");
      bits.push_back(c == '1');
    }
    return partition_solution(std::move(bits));
  }

  [[nodiscard]] int size() const noexcept { return static_cast<int>(bits_.size()); }
  [[nodiscard]] bool operator[](int v) const { return bits_[static_cast<std::size_t>(v)] != 0; }
  [[nodiscard]] std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  void flip(int v) {
    objective_.reset();
    bits_[static_cast<std::size_t>(v)] ^= 1;
  }
  void set(int v, bool side) {
    objective_.reset();
    bits_[static_cast<std::size_t>(v)] = side ? 1 : 0;
  }

  [[nodiscard]] partition_solution complement() const {
    partition_solution out(*this);
    for (auto& b : out.bits_) b ^= 1;
    out.objective_ = objective_;
    return out;
  }

  [[nodiscard]] std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

  [[nodiscard]] std::optional<objective_t> cached_objective() const noexcept { return objective_; }
  void set_objective(objective_t value) noexcept { objective_ = value; }
  void invalidate() noexcept { objective_.reset(); }

  friend bool operator==(const partition_solution& a, const partition_solution& b) noexcept {
    return a.bits_ == b.bits_;
  }

private:
  std::vector<std::uint8_t> bits_;
  std::optional<objective_t> objective_;
};

inline std::string to_text(const permutation_solution& s) {
  std::string out;
  for (int i = 0; i < s.size(); ++i) {
    if (i) out.push_back(' ');
    out += std::to_string(s[i]);
  }
  return out;
}

inline std::string to_text(const partition_solution& s) { return s.to_string(); }

// ---------------------------------------------------------------------------
// Symmetric difference
// ---------------------------------------------------------------------------

struct difference {
  std::vector<int> indices;
  [[nodiscard]] std::size_t size() const noexcept { return indices.size(); }
};

inline difference symmetric_difference(const partition_solution& a, const partition_solution& b) {
  if (a.size() != b.size()) throw dimension_error("symmetric_difference: size mismatch");
  difference d;
  for (int j = 0; j < a.size(); ++j)
    if (a[j] != b[j]) d.indices.push_back(j);
  return d;
}

/// Position-wise: j is in the difference when the two orders hold different elements at j.
inline difference symmetric_difference(const permutation_solution& a, const permutation_solution& b) {
  if (a.size() != b.size()) throw dimension_error("symmetric_difference: size mismatch");
  difference d;
  for (int j = 0; j < a.size(); ++j)
    if (a[j] != b[j]) d.indices.push_back(j);
  return d;
}

template <class Solution>
int distance(const Solution& a, const Solution& b) {
  if (a.size() != b.size()) throw dimension_error("distance: size mismatch");
  int count = 0;
  for (int j = 0; j < a.size(); ++j) count += a[j] != b[j];
  return count;
}

// ---------------------------------------------------------------------------
// Random stream
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seeded stream over the 64-bit Mersenne Twister. The engine's output
/// sequence is fixed by the C++ standard, and all derived draws below use
/// portable integer arithmetic, so a seed reproduces on every platform.
class random_stream {
public:
  explicit random_stream(std::uint64_t seed = 0) : seed_(seed), engine_(splitmix64(seed)) {}

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("random_stream::below: empty range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  std::size_t index(std::size_t size) { return static_cast<std::size_t>(below(size)); }

  /// Uniform in [0, 1) with 53 bits of precision.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in (low, high]; returns `high` when low >= high.
  double half_open_above(double low, double high) {
    if (!(high > low)) return high;
    return high - unit() * (high - low);
  }

  /// Independent stream for restart number `k` of this seed.
  [[nodiscard]] random_stream substream(std::uint64_t k) const {
    return random_stream(splitmix64(seed_ ^ splitmix64(k + 0x5bd1e995ULL)));
  }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace grasppr
