#include <gtest/gtest.h>

#include <random>

#include "grasppr/construction.hpp"
#include "grasppr/local_search.hpp"
#include "grasppr/lop.hpp"
#include "grasppr/maxcut.hpp"
#include "support.hpp"

using namespace grasppr;

TEST(LocalSearch, LocalOptimumIsFixedPoint) {
  auto inst = support::make_lop(support::random_matrix(7, 1));
  random_stream rng(1);
  auto s = local_search(inst, construct(inst, rcl_config{}, rng), search_depth::best_improving, rng);
  local_search_stats stats;
  auto again = local_search(inst, s, search_depth::best_improving, rng, neighborhood::insert, &stats);
  EXPECT_EQ(again, s);
  EXPECT_EQ(stats.moves, 0u);
}

TEST(LocalSearch, LopResultDominatesStartAndIsLocallyOptimal) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 3 + static_cast<int>(seed % 5);
    auto raw = support::random_matrix(n, seed, -20, 80);
    auto inst = support::make_lop(raw);
    std::mt19937_64 gen(seed);
    random_stream rng(seed);
    for (auto depth : {search_depth::first_improving, search_depth::best_improving}) {
      auto start = support::random_permutation(n, gen);
      auto s = local_search(inst, start, depth, rng);
      EXPECT_GE(support::lop_value(inst, s), support::lop_value(inst, start));
      for (const auto& m : enumerate_moves(inst, s)) EXPECT_LE(m.delta, 0);
    }
  }
}

TEST(LocalSearch, TriangleFromEmptyCutReachesTwo) {
  maxcut_instance g(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  random_stream rng(0);
  for (auto depth : {search_depth::first_improving, search_depth::best_improving}) {
    auto s = local_search(g, partition_solution::from_string("000"), depth, rng);
    EXPECT_EQ(cut_value(g, s), 2);
  }
}

TEST(LocalSearch, BestImprovingConsumesNoRandomness) {
  auto g = support::make_graph(support::random_graph(14, 0.5, -5, 10, 3));
  std::mt19937_64 gen(3);
  auto start = support::random_partition(14, gen);
  random_stream a(5), b(6);
  EXPECT_EQ(local_search(g, start, search_depth::best_improving, a), local_search(g, start, search_depth::best_improving, b));
  random_stream fresh(5);
  EXPECT_EQ(a.next(), fresh.next());
}

TEST(LocalSearch, BestImprovingTakesLargestDeltaEachPass) {
  auto inst = support::make_lop(support::random_matrix(6, 4));
  std::mt19937_64 gen(4);
  auto start = support::random_permutation(6, gen);
  auto moves = enumerate_moves(inst, start);
  objective_t best = 0;
  for (const auto& m : moves) best = std::max(best, m.delta);
  random_stream rng(0);
  local_search_stats stats;
  auto s = local_search(inst, start, search_depth::best_improving, rng, neighborhood::insert, &stats);
  if (best > 0) {
    // a second run limited to the first pass: apply the best move by hand
    auto st = inst.make_state(start);
    for (const auto& m : moves)
      if (m.delta == best) {
        st.apply(m);
        break;
      }
    auto continued = local_search(inst, st.solution(), search_depth::best_improving, rng);
    EXPECT_EQ(continued, s);
  }
}

TEST(LocalSearch, SwapNeighborhoodAlsoConverges) {
  auto inst = support::make_lop(support::random_matrix(8, 5));
  auto g = support::make_graph(support::random_graph(10, 0.5, -5, 10, 5));
  random_stream rng(7);
  auto a = local_search(inst, construct(inst, rcl_config{}, rng), search_depth::first_improving, rng, neighborhood::swap);
  EXPECT_TRUE(is_local_optimum(inst, a, neighborhood::swap));
  auto b = local_search(g, construct(g, rcl_config{}, rng), search_depth::first_improving, rng, neighborhood::swap);
  EXPECT_TRUE(is_local_optimum(g, b, neighborhood::swap));
}

TEST(EnumerateMoves, LopInsertNeighborhoodSize) {
  auto inst = support::make_lop(support::random_matrix(4, 1));
  auto moves = enumerate_moves(inst, permutation_solution::identity(4));
  EXPECT_EQ(moves.size(), 12u);
  for (const auto& m : moves) EXPECT_NE(m.from, m.to);
}

TEST(EnumerateMoves, LopScanOrderIsElementThenTarget) {
  auto inst = support::make_lop(support::random_matrix(4, 1));
  auto moves = enumerate_moves(inst, permutation_solution({2, 0, 3, 1}));
  for (std::size_t i = 1; i < moves.size(); ++i) {
    const auto& a = moves[i - 1];
    const auto& b = moves[i];
    EXPECT_TRUE(a.element < b.element || (a.element == b.element && a.to < b.to));
  }
}

TEST(EnumerateMoves, MaxcutTransferNeighborhoodSize) {
  auto g = support::make_graph(support::random_graph(9, 0.5, -5, 10, 1));
  auto moves = enumerate_moves(g, partition_solution(9));
  ASSERT_EQ(moves.size(), 9u);
  for (int v = 0; v < 9; ++v) EXPECT_EQ(moves[static_cast<std::size_t>(v)].u, v);
}

TEST(EnumerateMoves, EveryDeltaIsExact) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    auto raw = support::random_matrix(6, gen(), -50, 50);
    auto inst = support::make_lop(raw);
    auto s = support::random_permutation(6, gen);
    for (auto nb : {neighborhood::insert, neighborhood::swap})
      for (const auto& m : enumerate_moves(inst, s, nb)) {
        auto st = inst.make_state(s);
        st.apply(m);
        ASSERT_EQ(m.delta, support::lop_value(inst, st.solution()) - support::lop_value(inst, s));
      }
  }
}
