#include "whittle/whittle_index.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "whittle/policy_engine.hpp"
#include "whittle/subsidy_bandit.hpp"
#include "whittle/value_iteration_oracle.hpp"

using namespace whittle;
using whittle::testing::ChannelGen;
using whittle::testing::unit_grid;

TEST(IndexDiscounted, MyopicOutsideTheMiddleRegion) {
  const ChannelModel pos(0.3, 0.7, 0.6);
  for (double w : {0.0, 0.1, 0.3, 0.7, 0.85, 1.0}) EXPECT_DOUBLE_EQ(index_discounted(pos, 0.9, w), w * 0.6);
  const ChannelModel neg(0.8, 0.2);
  for (double w : {0.0, 0.2, 0.8, 0.95}) EXPECT_DOUBLE_EQ(index_discounted(neg, 0.9, w), w);
}

TEST(IndexDiscounted, ZeroDiscountIsMyopic) {
  ChannelGen gen(31);
  for (int i = 0; i < 200; ++i) {
    const auto ch = gen.channel(0.05, true);
    const double w = gen.uniform(0, 1);
    EXPECT_NEAR(index_discounted(ch, 0.0, w), w * ch.bandwidth(), 1e-14);
  }
}

TEST(IndexDiscounted, ReferenceValue) {
  const ChannelModel ch(0.2, 0.8);
  EXPECT_NEAR(index_discounted(ch, 0.9, 0.6), 0.6 / (1 - 0.72 + 0.54), 1e-14);
  EXPECT_NEAR(index_discounted(ch, 0.9, 0.6), 0.7317, 1e-4);
  EXPECT_NEAR(oracle_index(ch, 0.9, 0.6, 1e-9), 0.7317, 1e-4);
}

TEST(IndexDiscounted, QueryOverloadChecksCriterion) {
  const IndexQuery q{ChannelModel(0.2, 0.8), 0.6, Average{}};
  EXPECT_THROW(index_discounted(q), std::invalid_argument);
  EXPECT_NEAR(index_average(q), 0.75, 1e-14);
  EXPECT_NEAR(whittle_index(IndexQuery{ChannelModel(0.2, 0.8), 0.6, Discounted{0.9}}), 0.6 / 0.82, 1e-14);
}

TEST(IndexAverage, Examples) {
  const ChannelModel neg(0.8, 0.4);
  for (double w : {0.1, 0.4, 0.8, 0.9}) EXPECT_DOUBLE_EQ(index_average(neg, w), w);
  for (double w : {4.0 / 7.0, 0.6, 0.6399}) EXPECT_NEAR(index_average(neg, w), 0.8 / (1 + 0.8 - 0.64), 1e-12);
  EXPECT_NEAR(index_average(neg, 0.6), 0.6897, 1e-4);
  EXPECT_NEAR(index_average(ChannelModel(0.2, 0.8), 0.6), 0.75, 1e-14);
}

TEST(IndexAverage, PositiveMiddleBranchIsContinuousAtItsEnds) {
  ChannelGen gen(32);
  for (int i = 0; i < 200; ++i) {
    const auto ch = gen.positive(0.05);
    if (ch.p11() - ch.p01() < 0.05) continue;
    const double wo = stationary_belief(ch);
    EXPECT_NEAR(index_average(ch, ch.p01() + 1e-10), ch.p01(), 1e-7);
    EXPECT_NEAR(index_average(ch, wo - 1e-10), index_average(ch, wo), 1e-7);
  }
}

TEST(IndexProperty, BranchValuesAgreeAtSharedBoundaries) {
  ChannelGen gen(33);
  const double e = 1e-11;
  for (int i = 0; i < 300; ++i) {
    const auto ch = gen.channel(0.05);
    const double beta = gen.uniform(0.05, 0.99);
    const double wo = stationary_belief(ch);
    std::vector<double> cuts{ch.p01(), ch.p11(), wo};
    if (!ch.positively_correlated()) cuts.push_back(one_step_update(ch, ch.p11()));
    for (double c : cuts) {
      if (c - e < 0 || c + e > 1) continue;
      EXPECT_NEAR(index_discounted(ch, beta, c - e), index_discounted(ch, beta, c), 1e-9) << c;
      EXPECT_NEAR(index_discounted(ch, beta, c + e), index_discounted(ch, beta, c), 1e-9) << c;
      EXPECT_NEAR(index_average(ch, c - e), index_average(ch, c), 1e-9) << c;
      EXPECT_NEAR(index_average(ch, c + e), index_average(ch, c), 1e-9) << c;
    }
  }
}

TEST(IndexProperty, MonotoneInBelief) {
  ChannelGen gen(34);
  const auto grid = unit_grid(1001);
  for (int i = 0; i < 60; ++i) {
    const auto ch = gen.channel(0.02, true);
    const double wo = stationary_belief(ch);
    const double tp = one_step_update(ch, ch.p11());
    for (double beta : {0.3, 0.9, 0.99}) {
      for (std::size_t k = 1; k < grid.size(); ++k) {
        const double a = index_discounted(ch, beta, grid[k - 1]);
        const double b = index_discounted(ch, beta, grid[k]);
        EXPECT_GT(b, a - 1e-12);
        EXPECT_GT(b, a) << ch.p01() << " " << ch.p11() << " " << grid[k];
      }
    }
    for (std::size_t k = 1; k < grid.size(); ++k) {
      const double a = index_average(ch, grid[k - 1]);
      const double b = index_average(ch, grid[k]);
      EXPECT_GE(b, a - 1e-12);
      const bool in_band = !ch.positively_correlated() && grid[k - 1] >= wo && grid[k] < tp;
      if (!in_band) EXPECT_GT(b, a);
    }
  }
}

TEST(IndexProperty, DefiningEquationResidual) {
  // At m = W(omega), both actions are equally rewarding at omega.
  ChannelGen gen(35);
  for (int i = 0; i < 300; ++i) {
    const auto ch = gen.channel(0.05, true);
    const double beta = gen.uniform(0.1, 0.97);
    const double w = gen.uniform(0, 1);
    const double m = index_discounted(ch, beta, w);
    const SubsidyProblem p{ch, m, Discounted{beta}};
    const auto th = threshold_discounted(p);
    const auto a = anchor_values_discounted(p, th);
    const auto q = action_values_at(p, th, a, w);
    EXPECT_NEAR(q.active, q.passive, 1e-8) << ch.p01() << " " << ch.p11() << " " << beta << " " << w;
  }
}

TEST(IndexProperty, AverageIsTheDiscountedLimit) {
  ChannelGen gen(36);
  for (int i = 0; i < 50; ++i) {
    const auto ch = gen.channel(0.05, true);
    for (double w : unit_grid(101)) {
      EXPECT_NEAR(index_average(ch, w), index_discounted(ch, 0.9999, w), 1e-2);
    }
  }
}

TEST(IndexProperty, IdenticalChannelsRankLikeMyopic) {
  ChannelGen gen(37);
  for (int i = 0; i < 400; ++i) {
    const auto ch = gen.channel(0.05, true);
    const std::size_t n = 2 + i % 6;
    const std::vector<ChannelModel> models(n, ch);
    auto beliefs = gen.beliefs(n);
    if (i % 3 == 0) beliefs[1] = beliefs[0];  // exercise ties
    const int K = 1 + i % static_cast<int>(n);
    const auto myopic = select_myopic(models, beliefs, K);
    EXPECT_EQ(select_whittle(models, beliefs, K, Discounted{0.9}), myopic);
    EXPECT_EQ(select_whittle(models, beliefs, K, Average{}), myopic);
  }
}

TEST(IndexProperty, MatchesOracleBisection) {
  ChannelGen gen(38);
  for (int i = 0; i < 6; ++i) {
    const auto ch = gen.channel(0.05, true);
    for (double beta : {0.5, 0.9}) {
      for (double w : unit_grid(11)) {
        EXPECT_NEAR(index_discounted(ch, beta, w), oracle_index(ch, beta, w, 1e-9, 32), 1e-4);
      }
    }
  }
}

TEST(Breakpoints, NegativeChannelHasFourPointsWithoutGrayArea) {
  const ChannelModel ch(0.9, 0.2);
  const double w1 = 0.8;
  ASSERT_GE(w1, stationary_belief(ch));
  const auto bp = index_breakpoints(ch, 0.9, w1, 1e-3);
  EXPECT_EQ(bp.points.size(), 4u);
  EXPECT_FALSE(bp.gray_area.has_value());
  const auto below = index_breakpoints(ch, 0.9, 0.3, 1e-3);
  EXPECT_EQ(below.points.size(), 5u);
}

TEST(Breakpoints, PositiveGrayAreaIsNarrow) {
  ChannelGen gen(39);
  for (int i = 0; i < 100; ++i) {
    const auto ch = gen.positive(0.05);
    if (ch.p11() - ch.p01() < 1e-3) continue;
    for (double delta : {1e-2, 1e-3, 1e-5}) {
      const auto bp = index_breakpoints(ch, 0.9, gen.uniform(0, 1), delta);
      ASSERT_TRUE(bp.gray_area.has_value());
      EXPECT_LE(bp.gray_area->high - bp.gray_area->low, delta + 1e-15);
      EXPECT_NEAR(bp.gray_area->high, index_discounted(ch, 0.9, stationary_belief(ch)), 1e-15);
      EXPECT_TRUE(std::is_sorted(bp.points.begin(), bp.points.end()));
      EXPECT_EQ(std::adjacent_find(bp.points.begin(), bp.points.end()), bp.points.end());
    }
  }
}

TEST(Breakpoints, PassiveTimeConstantBetweenBreakpoints) {
  ChannelGen gen(40);
  for (int i = 0; i < 40; ++i) {
    const auto ch = gen.channel(0.05, true);
    const double beta = gen.uniform(0.3, 0.95);
    const double w1 = gen.uniform(0, 1);
    const auto bp = index_breakpoints(ch, beta, w1, 1e-4);
    std::vector<double> cuts{0.0};
    for (double p : bp.points) cuts.push_back(p);
    cuts.push_back(ch.bandwidth());
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      const double lo = cuts[j], hi = cuts[j + 1];
      if (hi - lo < 1e-9) continue;
      if (bp.gray_area && lo < bp.gray_area->high && bp.gray_area->low < hi) continue;
      auto d_at = [&](double m) { return evaluate_arm({ch, m, Discounted{beta}}, w1).passive_time; };
      EXPECT_NEAR(d_at(lo + 0.25 * (hi - lo)), d_at(lo + 0.75 * (hi - lo)), 1e-9) << lo << " " << hi;
    }
  }
}

TEST(VerifyIndexability, PassesOnReferenceChannels) {
  EXPECT_TRUE(verify_indexability(ChannelModel(0.2, 0.8), 0.9, 1e-3).passed);
  EXPECT_TRUE(verify_indexability(ChannelModel(0.45, 0.45), 0.9, 1e-2).passed);
  const auto stress = verify_indexability(ChannelModel(0.9, 0.1), 0.99, 1e-2);
  EXPECT_TRUE(stress.passed);
  EXPECT_LE(stress.max_violation, 1e-9);
  EXPECT_GT(stress.grid_points, 100u);
}
