#pragma once

// Test-side instance generators and brute-force oracles. Nothing here calls
// into the library's evaluation code, so the oracles stay independent.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "grasppr/core.hpp"
#include "grasppr/lop.hpp"
#include "grasppr/maxcut.hpp"

namespace support {

using grasppr::objective_t;

struct raw_lop {
  int n;
  std::vector<objective_t> c;  // row-major
};

struct raw_graph {
  int n;
  std::vector<grasppr::weighted_edge> edges;
};

inline raw_lop random_matrix(int n, std::uint64_t seed, int lo = 0, int hi = 99) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> d(lo, hi);
  raw_lop m{n, std::vector<objective_t>(static_cast<std::size_t>(n * n))};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.c[static_cast<std::size_t>(i * n + j)] = i == j ? 0 : d(gen);
  return m;
}

inline grasppr::lop_instance make_lop(const raw_lop& m) { return grasppr::lop_instance(m.n, m.c, "random"); }

inline raw_graph random_graph(int n, double density, int wlo, int whi, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<int> w(wlo, whi);
  raw_graph g{n, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (keep(gen)) g.edges.push_back({i, j, w(gen)});
  return g;
}

inline grasppr::maxcut_instance make_graph(const raw_graph& g) { return grasppr::maxcut_instance(g.n, g.edges, "random"); }

// Sum over ordered pairs (a before b) of c[a][b], straight from the definition.
inline objective_t lop_value(const raw_lop& m, const std::vector<int>& order) {
  objective_t v = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) v += m.c[static_cast<std::size_t>(order[i] * m.n + order[j])];
  return v;
}

inline objective_t lop_value(const grasppr::lop_instance& inst, const std::vector<int>& order) {
  objective_t v = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) v += inst.cost(order[i], order[j]);
  return v;
}

inline objective_t lop_value(const grasppr::lop_instance& inst, const grasppr::permutation_solution& s) {
  return lop_value(inst, std::vector<int>(s.order().begin(), s.order().end()));
}

// Sum of weights of edges whose endpoints carry different bits.
inline objective_t cut_value(const raw_graph& g, const std::vector<std::uint8_t>& bits) {
  objective_t v = 0;
  for (const auto& e : g.edges)
    if (bits[static_cast<std::size_t>(e.u)] != bits[static_cast<std::size_t>(e.v)]) v += e.w;
  return v;
}

inline objective_t cut_value(const grasppr::maxcut_instance& inst, const grasppr::partition_solution& s) {
  objective_t v = 0;
  for (const auto& e : inst.edges())
    if (s[e.u] != s[e.v]) v += e.w;
  return v;
}

// Exhaustive n! enumeration.
inline objective_t lop_optimum(const raw_lop& m) {
  std::vector<int> order(static_cast<std::size_t>(m.n));
  std::iota(order.begin(), order.end(), 0);
  objective_t best = lop_value(m, order);
  while (std::next_permutation(order.begin(), order.end())) best = std::max(best, lop_value(m, order));
  return best;
}

// Exhaustive 2^(n-1) enumeration with vertex 0 pinned (cut symmetry).
inline objective_t cut_optimum(const raw_graph& g) {
  objective_t best = std::numeric_limits<objective_t>::min();
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(g.n));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (g.n - 1)); ++mask) {
    for (int v = 1; v < g.n; ++v) bits[static_cast<std::size_t>(v)] = (mask >> (v - 1)) & 1U;
    best = std::max(best, cut_value(g, bits));
  }
  return best;
}

inline std::vector<int> random_order(int n, std::mt19937_64& gen) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), gen);
  return order;
}

inline grasppr::permutation_solution random_permutation(int n, std::mt19937_64& gen) {
  return grasppr::permutation_solution(random_order(n, gen));
}

inline grasppr::partition_solution random_partition(int n, std::mt19937_64& gen) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
  for (auto& b : bits) b = static_cast<std::uint8_t>(gen() & 1U);
  return grasppr::partition_solution(bits);
}

inline int positionwise_distance(const grasppr::permutation_solution& a, const grasppr::permutation_solution& b) {
  int d = 0;
  for (int i = 0; i < a.size(); ++i) d += a.order()[static_cast<std::size_t>(i)] != b.order()[static_cast<std::size_t>(i)];
  return d;
}

inline int hamming(const grasppr::partition_solution& a, const grasppr::partition_solution& b) {
  int d = 0;
  for (int i = 0; i < a.size(); ++i) d += a.bits()[static_cast<std::size_t>(i)] != b.bits()[static_cast<std::size_t>(i)];
  return d;
}

inline int oracle_distance(const grasppr::permutation_solution& a, const grasppr::permutation_solution& b) {
  return positionwise_distance(a, b);
}
inline int oracle_distance(const grasppr::partition_solution& a, const grasppr::partition_solution& b) { return hamming(a, b); }

}  // namespace support
