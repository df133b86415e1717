#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "landscape/diagram.hpp"
#include "landscape/error.hpp"
#include "landscape/landscape.hpp"
#include "oracles.hpp"

namespace {

using namespace landscape;

std::vector<CriticalPoint> pts(const PiecewiseLinearFunction& f) {
  return {f.points().begin(), f.points().end()};
}

void expect_points(const PiecewiseLinearFunction& f, std::vector<CriticalPoint> want) {
  const auto got = pts(f);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_NEAR(got[i].t, want[i].t, 1e-12) << "point " << i;
    EXPECT_NEAR(got[i].value, want[i].value, 1e-12) << "point " << i;
  }
}

PersistenceDiagram diagram(std::vector<DiagramPoint> p, int degree = 1) { return {degree, std::move(p)}; }

TEST(Tent, Examples) {
  expect_points(tent({0, 2}), {{0, 0}, {1, 1}, {2, 0}});
  EXPECT_TRUE(tent({3, 3}).is_zero());
  expect_points(tent({1, 3}), {{1, 0}, {2, 1}, {3, 0}});
  EXPECT_THROW(tent({0, kInfinity}), ContractError);
}

TEST(LandscapeFromDiagram, SinglePoint) {
  const auto l = landscape_from_diagram(diagram({{0, 2}}));
  ASSERT_EQ(l.num_levels(), 1u);
  expect_points(l.level(1), {{0, 0}, {1, 1}, {2, 0}});
  EXPECT_TRUE(l.level(2).is_zero());
}

TEST(LandscapeFromDiagram, NestedPoints) {
  const auto l = landscape_from_diagram(diagram({{0, 4}, {1, 3}}));
  ASSERT_EQ(l.num_levels(), 2u);
  expect_points(l.level(1), {{0, 0}, {2, 2}, {4, 0}});
  expect_points(l.level(2), {{1, 0}, {2, 1}, {3, 0}});
}

TEST(LandscapeFromDiagram, OverlappingPoints) {
  const auto l = landscape_from_diagram(diagram({{0, 2}, {1, 3}}));
  ASSERT_EQ(l.num_levels(), 2u);
  expect_points(l.level(1), {{0, 0}, {1, 1}, {1.5, 0.5}, {2, 1}, {3, 0}});
  expect_points(l.level(2), {{1, 0}, {1.5, 0.5}, {2, 0}});
}

TEST(LandscapeFromDiagram, DisjointPointsKeepZeroGap) {
  const auto l = landscape_from_diagram(diagram({{0, 1}, {3, 4}}));
  ASSERT_EQ(l.num_levels(), 1u);
  expect_points(l.level(1), {{0, 0}, {0.5, 0.5}, {1, 0}, {3, 0}, {3.5, 0.5}, {4, 0}});
}

TEST(LandscapeFromDiagram, TouchingPoints) {
  const auto l = landscape_from_diagram(diagram({{0, 2}, {2, 4}}));
  ASSERT_EQ(l.num_levels(), 1u);
  expect_points(l.level(1), {{0, 0}, {1, 1}, {2, 0}, {3, 1}, {4, 0}});
}

TEST(LandscapeFromDiagram, DuplicatesStack) {
  const auto l = landscape_from_diagram(diagram({{0, 2}, {0, 2}, {0, 2}}));
  ASSERT_EQ(l.num_levels(), 3u);
  for (std::size_t k = 1; k <= 3; ++k) expect_points(l.level(k), {{0, 0}, {1, 1}, {2, 0}});
}

TEST(LandscapeFromDiagram, EmptyAndZeroPersistence) {
  EXPECT_EQ(landscape_from_diagram(diagram({})).num_levels(), 0u);
  EXPECT_EQ(landscape_from_diagram(diagram({{1, 1}, {2, 2}})).num_levels(), 0u);
}

TEST(LandscapeFromDiagram, LevelCap) {
  const auto l = landscape_from_diagram(diagram({{0, 4}, {1, 3}, {1.5, 2.5}}), 2);
  EXPECT_EQ(l.num_levels(), 2u);
}

TEST(LandscapeFromDiagram, InfiniteIntervalNamesThePoint) {
  try {
    landscape_from_diagram(diagram({{0, 1}, {0, kInfinity}}, 1));
    FAIL() << "expected ContractError";
  } catch (const ContractError& e) {
    EXPECT_NE(std::string(e.what()).find("(0, inf)"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("degree 1"), std::string::npos) << e.what();
  }
}

TEST(Evaluate, Examples) {
  const auto a = landscape_from_diagram(diagram({{0, 2}}));
  EXPECT_DOUBLE_EQ(evaluate(a, 1, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(evaluate(a, 2, 1.0), 0.0);
  const auto b = landscape_from_diagram(diagram({{0, 2}, {1, 3}}));
  EXPECT_DOUBLE_EQ(evaluate(b, 1, 1.5), 0.5);
}

TEST(LandscapeFromDiagram, MatchesKthLargestTent) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> at(-6.0, 10.0);
  for (int c = 0; c < 1000; ++c) {
    const auto d = oracle::random_diagram(gen, 20);
    const auto l = landscape_from_diagram(d);
    for (int i = 0; i < 200; ++i) {
      const double t = at(gen);
      for (std::size_t k = 1; k <= l.num_levels() + 1; ++k) {
        ASSERT_NEAR(l(k, t), oracle::kth_tent(d, k, t), 1e-12) << "case " << c << " k " << k << " t " << t;
      }
    }
  }
}

TEST(LandscapeFromDiagram, ShapeProperties) {
  std::mt19937_64 gen(2);
  for (int c = 0; c < 1000; ++c) {
    const auto l = landscape_from_diagram(oracle::random_diagram(gen, 20));
    for (std::size_t k = 1; k <= l.num_levels(); ++k) {
      const auto& f = l.level(k);
      ASSERT_TRUE(oracle::lipschitz_nonnegative(f));
      ASSERT_TRUE(oracle::dominates(f, l.level(k + 1)));
      // Slopes are +-1, or 0 across a gap where the level vanishes.
      const auto p = f.points();
      for (std::size_t i = 1; i < p.size(); ++i) {
        const double slope = (p[i].value - p[i - 1].value) / (p[i].t - p[i - 1].t);
        const bool gap = p[i].value == 0.0 && p[i - 1].value == 0.0;
        ASSERT_TRUE(std::abs(std::abs(slope) - 1.0) < 1e-9 || (gap && slope == 0.0))
            << "slope " << slope;
      }
      EXPECT_EQ(p.front().value, 0.0);
      EXPECT_EQ(p.back().value, 0.0);
    }
  }
}

TEST(Rank, Examples) {
  const auto d = diagram({{0, 2}, {1, 3}});
  EXPECT_EQ(rank(d, 1, 2), 2u);
  EXPECT_EQ(rank(d, 0.5, 2.5), 0u);
  EXPECT_EQ(rank(d, 2, 1), 0u);
  // Closed convention on both endpoints.
  EXPECT_EQ(rank(d, 0, 2), 1u);
}

TEST(RescaledRank, Examples) {
  const auto d = diagram({{0, 2}});
  EXPECT_EQ(rescaled_rank(d, 1, 1), 1u);
  EXPECT_EQ(rescaled_rank(d, 1, 1.1), 0u);
  EXPECT_EQ(rescaled_rank(d, 1, -0.1), 0u);
}

TEST(RescaledRank, MonotoneAndDualToLandscape) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> at(-6.0, 10.0), height(0.0, 3.0);
  for (int c = 0; c < 300; ++c) {
    const auto d = oracle::random_diagram(gen, 12);
    const auto l = landscape_from_diagram(d);
    for (int i = 0; i < 50; ++i) {
      const double t = at(gen);
      double h1 = height(gen), h2 = height(gen);
      if (h1 > h2) std::swap(h1, h2);
      EXPECT_GE(rescaled_rank(d, t, h1), rescaled_rank(d, t, h2));
      // lambda_k(t) >= m  iff  at least k bars contain [t - m, t + m].
      const double m = h2 + 1e-9;
      for (std::size_t k = 1; k <= d.size() + 1; ++k) {
        const double v = l(k, t);
        if (std::abs(v - m) < 1e-9) continue;
        EXPECT_EQ(v >= m, rescaled_rank(d, t, m) >= k) << "k " << k << " t " << t << " m " << m;
      }
    }
  }
}

TEST(Rank, BettiNumberFromLandscape) {
  // Away from endpoints, rank(t, t) counts the positive levels at t.
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> at(-6.0, 10.0);
  for (int c = 0; c < 300; ++c) {
    const auto d = oracle::random_diagram(gen, 12);
    const auto l = landscape_from_diagram(d);
    for (int i = 0; i < 50; ++i) {
      const double t = at(gen);
      bool endpoint = false;
      for (const auto& p : d.points) endpoint = endpoint || p.birth == t || p.death == t;
      if (endpoint) continue;
      std::size_t positive = 0;
      for (std::size_t k = 1; k <= l.num_levels(); ++k) positive += l(k, t) > 0.0;
      EXPECT_EQ(rank(d, t, t), positive);
    }
  }
}

TEST(Threshold, Examples) {
  EXPECT_EQ(threshold_diagram(diagram({{0, kInfinity}}), 5).points, (std::vector<DiagramPoint>{{0, 5}}));
  EXPECT_TRUE(threshold_diagram(diagram({{-10, -7}}), 5).points.empty());
  EXPECT_EQ(threshold_diagram(diagram({{-6, 3}}), 5).points, (std::vector<DiagramPoint>{{-5, 3}}));
  EXPECT_TRUE(threshold_diagram(diagram({{6, kInfinity}}), 5).points.empty());
  EXPECT_THROW(threshold_diagram(diagram({{0, 1}}), 0), ContractError);
}

TEST(PersSummary, Examples) {
  EXPECT_DOUBLE_EQ(pers_summary(diagram({{0, 2}}), PersistenceSummary::kSumOfSquares), 4.0);
  EXPECT_DOUBLE_EQ(pers_summary(diagram({{0, 2}}), PersistenceSummary::kMaximum), 2.0);
  EXPECT_DOUBLE_EQ(pers_summary(diagram({}), PersistenceSummary::kSumOfSquares), 0.0);
  EXPECT_DOUBLE_EQ(pers_summary(diagram({}), PersistenceSummary::kMaximum), 0.0);
  EXPECT_DOUBLE_EQ(pers_summary(diagram({{0, 2}, {1, 3}}), PersistenceSummary::kSumOfSquares), 8.0);
  EXPECT_DOUBLE_EQ(pers_summary(diagram({{0, 2}, {1, 3}}), PersistenceSummary::kMaximum), 2.0);
  EXPECT_THROW(pers_summary(diagram({{0, kInfinity}}), PersistenceSummary::kMaximum), ContractError);
}

TEST(LinearCombination, Examples) {
  const auto a = landscape_from_diagram(diagram({{0, 2}}));
  const auto b = landscape_from_diagram(diagram({{0, 4}}));
  const auto mean = combine(0.5, a, 0.5, b);
  expect_points(mean.level(1), {{0, 0}, {1, 1}, {2, 1}, {4, 0}});
  EXPECT_EQ(combine(1.0, a, -1.0, a).num_levels(), 0u);
  const auto twice = linear_combination({{2.0, &a}});
  expect_points(twice.level(1), {{0, 0}, {1, 2}, {2, 0}});
  EXPECT_THROW(linear_combination(std::span<const LandscapeTerm>{}), ContractError);
}

TEST(LinearCombination, AffineCombinationOfOneLandscapeIsIdentity) {
  std::mt19937_64 gen(6);
  for (int c = 0; c < 100; ++c) {
    const auto l = landscape_from_diagram(oracle::random_diagram(gen, 10));
    EXPECT_EQ(linear_combination({{0.25, &l}, {0.5, &l}, {0.25, &l}}), l);
  }
}

TEST(LinearCombination, NonNegativeWeightsPreserveNesting) {
  std::mt19937_64 gen(8);
  for (int c = 0; c < 100; ++c) {
    const auto a = landscape_from_diagram(oracle::random_diagram(gen, 10));
    const auto b = landscape_from_diagram(oracle::random_diagram(gen, 10));
    const auto m = combine(0.3, a, 0.7, b);
    for (std::size_t k = 1; k <= m.num_levels(); ++k) {
      EXPECT_TRUE(oracle::dominates(m.level(k), m.level(k + 1)));
      EXPECT_TRUE(oracle::lipschitz_nonnegative(m.level(k)));
    }
  }
}

}  // namespace
