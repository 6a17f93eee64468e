#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "octadefect/scr.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace octadefect {
namespace {

using testing_support::mask_of;

TEST(Greedy, Examples) {
  EXPECT_EQ(greedy_scr(SCRInstance(5, {{2, 4}})), (IndexSet{2}));
  EXPECT_EQ(greedy_scr(SCRInstance(3, {{0, 1}, {1, 2}})), (IndexSet{1}));
  EXPECT_EQ(greedy_scr(SCRInstance(3, {{0}, {1}, {2}})), (IndexSet{0, 1, 2}));
}

TEST(Greedy, PickOrderFollowsCoverage) {
  // Element 3 covers three sets, then 0 breaks the tie against 1.
  const SCRInstance inst(4, {{0, 3}, {1, 3}, {2, 3}, {0, 1}});
  EXPECT_EQ(greedy_scr_picks(inst), (std::vector<std::size_t>{3, 0}));
}

TEST(Optimal, Examples) {
  const auto tri = optimal_scr(SCRInstance(3, {{0, 1}, {1, 2}, {2, 0}}));
  EXPECT_EQ(tri.size(), 2u);
  EXPECT_EQ(tri, (IndexSet{0, 1}));
  EXPECT_EQ(optimal_scr(SCRInstance(4, {{1, 3}})).size(), 1u);
  EXPECT_EQ(optimal_scr(SCRInstance(9, {{1, 6}, {6}, {0, 6, 8}})), (IndexSet{6}));
}

TEST(Instance, RejectsMalformed) {
  EXPECT_THROW(SCRInstance(3, {}), Error);
  EXPECT_THROW(SCRInstance(3, {{0}, {}}), Error);
  EXPECT_THROW(SCRInstance(3, {{3}}), Error);
}

TEST(Optimal, Guard) {
  ScrGuards g;
  g.max_sets = 2;
  try {
    optimal_scr(SCRInstance(3, {{0}, {1}, {2}}), g);
    FAIL() << "expected guard error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::guard_exceeded);
  }
}

TEST(CoveringBound, Examples) {
  EXPECT_DOUBLE_EQ(theorem5_bound(7, 7, 1, 1.0), 1.0);
  EXPECT_NEAR(theorem5_bound(100, 10, 100, 1.0), 10.0 * std::log(10.0), 1e-12);
  EXPECT_NEAR(theorem5_bound(100, 10, 100, 1.0), 23.03, 0.01);
  EXPECT_DOUBLE_EQ(theorem5_bound(40, 3, 9, 2.0), 2.0 * theorem5_bound(40, 3, 9, 1.0));
  EXPECT_THROW(theorem5_bound(5, 0, 1, 1.0), Error);
}

TEST(Scr, RandomAgainstBruteForce) {
  std::mt19937_64 rng(501);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    const std::size_t t = 1 + rng() % 10;
    std::vector<IndexSet> sets;
    std::vector<std::uint32_t> masks;
    for (std::size_t i = 0; i < t; ++i) {
      IndexSet s;
      while (s.empty())
        for (std::size_t e = 0; e < n; ++e)
          if (rng() % 3 == 0) s.insert(e);
      masks.push_back(mask_of(s));
      sets.push_back(std::move(s));
    }
    const SCRInstance inst(n, sets);
    const IndexSet greedy = greedy_scr(inst);
    const IndexSet best = optimal_scr(inst);
    EXPECT_TRUE(inst.is_hit_by(greedy));
    EXPECT_TRUE(inst.is_hit_by(best));
    EXPECT_EQ(best.size(), oracle::min_hitting_set(masks, n));
    EXPECT_GE(greedy.size(), best.size());
    EXPECT_LE(static_cast<double>(greedy.size()),
              (1.0 + std::log(static_cast<double>(t))) * static_cast<double>(best.size()) + 1e-9);
    // Every pick hit at least one new set.
    EXPECT_EQ(greedy_scr_picks(inst).size(), greedy.size());
  }
}

}  // namespace
}  // namespace octadefect
