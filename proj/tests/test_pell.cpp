#include "hkperiod/pell.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hkp;

TEST(Pell, FundamentalUnits) {
  EXPECT_EQ(fundamental_unit(2), (PellSolution{3, 2}));
  EXPECT_EQ(fundamental_unit(13), (PellSolution{649, 180}));
  EXPECT_EQ(fundamental_unit(61), (PellSolution{Integer("1766319049"), 226153980}));
  EXPECT_THROW(fundamental_unit(9), hypothesis_error);
}

TEST(Pell, MinimalSolutions) {
  EXPECT_EQ(*minimal_solution(13, -3), (PellSolution{7, 2}));
  EXPECT_EQ(*minimal_solution(5, -1), (PellSolution{2, 1}));
  EXPECT_EQ(*minimal_solution(20, 5), (PellSolution{5, 1}));
  EXPECT_EQ(*minimal_solution(116, 5), (PellSolution{11, 1}));
  EXPECT_EQ(*minimal_solution(4, 1), (PellSolution{1, 0}));
  EXPECT_EQ(*minimal_solution(4, 5), (PellSolution{3, 1}));
  EXPECT_FALSE(minimal_solution(52, 5));
  EXPECT_FALSE(minimal_solution(3, -1));
  EXPECT_THROW(minimal_solution(5, 0), std::invalid_argument);
  EXPECT_THROW(minimal_solution(0, 1), std::invalid_argument);
}

TEST(Pell, AgreesWithScanOnSmallGrid) {
  for (long e = 1; e <= 60; ++e) {
    for (long t = -60; t <= 60; ++t) {
      if (t == 0) continue;
      if (e == 1 || e == 4 || e == 9 || e == 16 || e == 25 || e == 36 || e == 49) {
        if (t == 1) continue;
      }
      const auto ours = minimal_solution(e, t);
      const auto scan = oracle::pell_scan(e, t, 20000);
      if (ours && ours->b <= 20000) {
        ASSERT_TRUE(scan) << e << " " << t;
        EXPECT_EQ(ours->a, scan->first) << e << " " << t;
        EXPECT_EQ(ours->b, scan->second) << e << " " << t;
      } else {
        EXPECT_FALSE(scan) << e << " " << t;
      }
    }
  }
}

TEST(Pell, SolutionsUpToMatchScan) {
  for (long e : {2, 3, 5, 6, 7, 13, 21, 29, 33}) {
    for (long t : {-15, -5, -3, -1, 1, 3, 4, 5, 9, 12}) {
      const auto ours = solutions_up_to(e, t, 3000);
      const auto scan = oracle::pell_scan_all(e, t, 3000);
      ASSERT_EQ(ours.size(), scan.size()) << e << " " << t;
      for (std::size_t i = 0; i < ours.size(); ++i) {
        EXPECT_EQ(ours[i].a, scan[i].first);
        EXPECT_EQ(ours[i].b, scan[i].second);
      }
    }
  }
}

TEST(Pell, RandomSolutionsSatisfyEquationAndMinimality) {
  std::mt19937_64 gen(20261015);
  std::uniform_int_distribution<long> de(2, 400), dt(-500, 500);
  for (int i = 0; i < 400; ++i) {
    const long e = de(gen), t = dt(gen);
    if (t == 0) continue;
    const auto s = minimal_solution(e, t);
    if (!s) {
      EXPECT_FALSE(oracle::pell_scan(e, t, 5000)) << e << " " << t;
      continue;
    }
    if (t == 1 && is_perfect_square(Integer(e))) continue;
    EXPECT_EQ(s->a * s->a - e * s->b * s->b, t);
    EXPECT_GT(s->a, 0);
    EXPECT_GT(s->b, 0);
    if (s->b <= 5000) {
      const auto scan = oracle::pell_scan(e, t, 5000);
      ASSERT_TRUE(scan);
      EXPECT_EQ(s->b, scan->second) << e << " " << t;
    }
  }
}

TEST(Pell, ClassRepresentativesSolveTheEquation) {
  for (long e : {6, 10, 34, 61, 94}) {
    for (long t : {-18, -9, -6, 7, 25, 50}) {
      for (const auto& r : solution_classes(e, t)) EXPECT_EQ(r.a * r.a - e * r.b * r.b, t);
    }
  }
}
