#include "whittle/subsidy_bandit.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "whittle/errors.hpp"
#include "whittle/value_iteration_oracle.hpp"
#include "whittle/whittle_index.hpp"

using namespace whittle;
using whittle::testing::ChannelGen;
using whittle::testing::unit_grid;

namespace {

SubsidyProblem discounted(const ChannelModel& ch, double m, double beta) { return {ch, m, Discounted{beta}}; }

struct Closed {
  ThresholdResult th;
  AnchorValues anchors;
};

Closed solve(const SubsidyProblem& p) {
  const auto th = threshold_discounted(p);
  return {th, anchor_values_discounted(p, th)};
}

double closed_value(const SubsidyProblem& p, double w) {
  const auto c = solve(p);
  return value_at(p, c.th, c.anchors, w);
}

// Subsidies near which V(omega; m) has a kink.
bool near_breakpoint(const ChannelModel& ch, double beta, double w, double m, double guard) {
  const auto bp = index_breakpoints(ch, beta, w, guard);
  for (double b : bp.points) {
    if (std::fabs(m - b) < guard) return true;
  }
  if (bp.gray_area && m > bp.gray_area->low - guard && m < bp.gray_area->high + guard) return true;
  return std::fabs(m) < guard || std::fabs(m - ch.bandwidth()) < guard;
}

}  // namespace

TEST(ThresholdDiscounted, RegimesFollowTheSubsidy) {
  const ChannelModel ch(0.2, 0.8);
  EXPECT_EQ(threshold_discounted(discounted(ch, -0.5, 0.9)).kind, ThresholdKind::kAlwaysActive);
  EXPECT_EQ(threshold_discounted(discounted(ch, 1.0, 0.9)).kind, ThresholdKind::kAlwaysPassive);
  EXPECT_EQ(threshold_discounted(discounted(ChannelModel(0.2, 0.8, 0.5), 0.5, 0.9)).kind,
            ThresholdKind::kAlwaysPassive);
}

TEST(ThresholdDiscounted, InvertsTheIndex) {
  const ChannelModel ch(0.2, 0.8);
  const auto th = threshold_discounted(discounted(ch, 0.7317, 0.9));
  ASSERT_EQ(th.kind, ThresholdKind::kInterior);
  EXPECT_NEAR(th.omega_star, 0.6, 1e-4);

  // The oracle agrees on which side of the threshold is passive.
  ValueIterationOracle oracle(ch, 0.9, 0.5, 1e-10);
  oracle.solve(0.7317);
  EXPECT_LE(oracle.action_gap_at(th.omega_star - 1e-3), 0.0);
  EXPECT_GT(oracle.action_gap_at(th.omega_star + 1e-3), 0.0);
}

TEST(ThresholdDiscounted, RejectsAverageCriterion) {
  EXPECT_THROW(threshold_discounted({ChannelModel(0.2, 0.8), 0.3, Average{}}), std::invalid_argument);
}

TEST(AnchorValues, AlwaysPassive) {
  const auto p = discounted(ChannelModel(0.2, 0.8), 1.0, 0.9);
  const auto a = anchor_values_discounted(p, threshold_discounted(p));
  EXPECT_NEAR(a.v_p01, 10.0, 1e-12);
  EXPECT_NEAR(a.v_p11, 10.0, 1e-12);
  EXPECT_NEAR(a.d_p01, 10.0, 1e-12);
  EXPECT_NEAR(a.d_p11, 10.0, 1e-12);
}

TEST(AnchorValues, AlwaysActive) {
  const auto p = discounted(ChannelModel(0.2, 0.8), -0.1, 0.9);
  const auto a = anchor_values_discounted(p, threshold_discounted(p));
  EXPECT_NEAR(a.v_p01, 0.2 / (0.1 * 0.46), 1e-12);
  EXPECT_NEAR(a.v_p01, 4.3478, 1e-4);
  EXPECT_EQ(a.d_p01, 0.0);
  EXPECT_EQ(a.d_p11, 0.0);
  EXPECT_NEAR(a.v_p01, oracle_value_iteration(p.channel, 0.9, -0.1, 0.2, 1e-10), 1e-8);
}

TEST(AnchorValues, InteriorMatchesOracle) {
  ChannelGen gen(21);
  for (int i = 0; i < 40; ++i) {
    const auto ch = gen.channel(0.05, true);
    const double beta = gen.uniform(0.3, 0.95);
    const double m = gen.uniform(0.0, ch.bandwidth());
    const auto p = discounted(ch, m, beta);
    const auto a = anchor_values_discounted(p, threshold_discounted(p));
    ValueIterationOracle oracle(ch, beta, 0.5, 1e-10);
    oracle.solve(m);
    EXPECT_NEAR(a.v_p01, oracle.value_p01(), 1e-6);
    EXPECT_NEAR(a.v_p11, oracle.value_p11(), 1e-6);
    EXPECT_GE(a.d_p01, 0.0);
    EXPECT_LE(a.d_p01, 1.0 / (1.0 - beta) + 1e-12);
    EXPECT_GE(a.d_p11, 0.0);
    EXPECT_LE(a.d_p11, 1.0 / (1.0 - beta) + 1e-12);
  }
}

TEST(AnchorValues, RejectsInconsistentThreshold) {
  const auto p = discounted(ChannelModel(0.2, 0.8), 0.5, 0.9);
  EXPECT_THROW(anchor_values_discounted(p, ThresholdResult::always_active()), InconsistentThreshold);
  EXPECT_THROW(anchor_values_discounted(p, ThresholdResult::always_passive()), InconsistentThreshold);
  auto th = threshold_discounted(p);
  th.omega_star += 0.05;
  EXPECT_THROW(anchor_values_discounted(p, th), InconsistentThreshold);
}

TEST(ValueAt, AlwaysPassiveIsTheSubsidyAnnuity) {
  const ChannelModel ch(0.3, 0.6);
  for (double m : {1.0, 1.4}) {
    const auto p = discounted(ch, m, 0.9);
    for (double w : unit_grid(11)) EXPECT_NEAR(closed_value(p, w), m / 0.1, 1e-12);
  }
}

TEST(ValueAt, AlwaysActiveClosedForm) {
  const ChannelModel ch(0.2, 0.8);
  const double b = 0.9;
  const auto p = discounted(ch, -0.2, b);
  for (double w : unit_grid(11)) {
    const double expected = (w * (1 - b) + 0.2 * b) / ((1 - b) * (1 - b * 0.8 + b * 0.2));
    EXPECT_NEAR(closed_value(p, w), expected, 1e-12);
  }
}

TEST(ValueAt, InteriorMatchesOracleOnOmegaGrid) {
  for (const auto& ch : {ChannelModel(0.2, 0.8), ChannelModel(0.8, 0.3), ChannelModel(0.1, 0.95, 0.6)}) {
    for (double m : {0.1, 0.35, 0.5, 0.58}) {
      const auto p = discounted(ch, m, 0.9);
      const auto c = solve(p);
      ValueIterationOracle oracle(ch, 0.9, 0.5, 1e-10);
      oracle.solve(m);
      for (double w : unit_grid(101)) EXPECT_NEAR(value_at(p, c.th, c.anchors, w), oracle.value_at(w), 1e-6);
    }
  }
}

TEST(PassiveTimeAt, ExtremeRegimes) {
  const ChannelModel ch(0.6, 0.3);
  const auto active = discounted(ch, -0.1, 0.8);
  const auto passive = discounted(ch, 1.0, 0.8);
  const auto ca = solve(active);
  const auto cp = solve(passive);
  for (double w : unit_grid(11)) {
    EXPECT_EQ(passive_time_at(active, ca.th, ca.anchors, w), 0.0);
    EXPECT_NEAR(passive_time_at(passive, cp.th, cp.anchors, w), 5.0, 1e-12);
  }
}

TEST(PassiveTimeAt, MatchesRightFiniteDifference) {
  ChannelGen gen(22);
  const double h = 1e-7;
  int checked = 0;
  for (int i = 0; i < 15; ++i) {
    const auto ch = gen.channel(0.05, true);
    for (double beta : {0.5, 0.9}) {
      for (double w : unit_grid(11)) {
        for (int k = 1; k < 20; ++k) {
          const double m = ch.bandwidth() * k / 20.0;
          if (near_breakpoint(ch, beta, w, m, 1e-4)) continue;
          const auto p = discounted(ch, m, beta);
          const auto c = solve(p);
          const double fd = (closed_value(discounted(ch, m + h, beta), w) - value_at(p, c.th, c.anchors, w)) / h;
          EXPECT_NEAR(passive_time_at(p, c.th, c.anchors, w), fd, 1e-3) << "m=" << m << " w=" << w;
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 2000);
}

TEST(Oracle, ExtremeRegimes) {
  const ChannelModel ch(0.25, 0.7);
  const double tol = 1e-8;
  EXPECT_NEAR(oracle_value_iteration(ch, 0.9, 1.0, 0.4, tol), 10.0, tol);
  const double wo = stationary_belief(ch);
  EXPECT_NEAR(oracle_value_iteration(ch, 0.9, -0.3, wo, tol), wo / 0.1, tol);
}

TEST(Oracle, MatchesClosedFormAtReferencePoint) {
  const ChannelModel ch(0.2, 0.8);
  const double tol = 1e-9;
  const double oracle = oracle_value_iteration(ch, 0.9, 0.5, 0.5, tol);
  EXPECT_NEAR(closed_value(discounted(ch, 0.5, 0.9), 0.5), oracle, std::max(tol, 1e-6));
}

TEST(Oracle, RejectsBadArguments) {
  EXPECT_THROW(ValueIterationOracle(ChannelModel(0.2, 0.8), 1.0, 0.5, 1e-6), std::invalid_argument);
  EXPECT_THROW(ValueIterationOracle(ChannelModel(0.2, 0.8), 0.9, 0.5, 0.0), std::invalid_argument);
}

TEST(AverageValuePassive, ExtremeBranches) {
  const ChannelModel ch(0.2, 0.8);
  const SubsidyProblem low{ch, -0.1, Average{}};
  const auto jl = average_value_passive(low, threshold_average(low));
  EXPECT_DOUBLE_EQ(jl.reward_rate, 0.5);
  EXPECT_EQ(jl.passive_share, 0.0);

  const SubsidyProblem high{ch, 0.9, Average{}};
  const auto jh = average_value_passive(high, threshold_average(high));
  EXPECT_DOUBLE_EQ(jh.reward_rate, 0.9);
  EXPECT_EQ(jh.passive_share, 1.0);
}

TEST(AverageValuePassive, IsTheDiscountedLimit) {
  const double beta = 0.9999;
  for (const auto& ch : {ChannelModel(0.2, 0.8), ChannelModel(0.8, 0.4), ChannelModel(0.3, 0.9, 0.7)}) {
    for (double m : {0.05, 0.3, 0.55, 0.62, 0.68, 0.71, 0.74, 0.85}) {
      if (m >= ch.bandwidth()) continue;
      const SubsidyProblem avg{ch, m, Average{}};
      const auto j = average_value_passive(avg, threshold_average(avg));
      EXPECT_GE(j.passive_share, 0.0);
      EXPECT_LE(j.passive_share, 1.0);
      const auto p = discounted(ch, m, beta);
      EXPECT_NEAR(j.reward_rate, (1.0 - beta) * closed_value(p, stationary_belief(ch)), 1e-2) << m;
    }
  }
}

TEST(AverageValuePassive, PositiveInteriorBandMatchesLimit) {
  // m inside the p01 <= omega* < omega_o band of p01=0.2, p11=0.8.
  const ChannelModel ch(0.2, 0.8);
  const double m = index_average(ch, 0.42);
  const SubsidyProblem avg{ch, m, Average{}};
  const auto th = threshold_average(avg);
  ASSERT_EQ(th.kind, ThresholdKind::kInterior);
  ASSERT_GE(th.omega_star, 0.2);
  ASSERT_LT(th.omega_star, 0.5);
  const auto j = average_value_passive(avg, th);
  EXPECT_GT(j.passive_share, 0.0);
  EXPECT_LT(j.passive_share, 1.0);
  EXPECT_NEAR(j.reward_rate, 1e-4 * closed_value(discounted(ch, m, 0.9999), 0.3), 1e-2);
}

// ---- properties --------------------------------------------------------------

TEST(SubsidyBanditProperty, ThresholdNondecreasingInSubsidy) {
  ChannelGen gen(23);
  for (int i = 0; i < 20; ++i) {
    const auto ch = gen.channel(0.05, true);
    for (double beta : {0.3, 0.7, 0.95}) {
      double previous = -2.0;
      for (double m = -0.1; m <= ch.bandwidth() + 0.1; m += 1e-3) {
        const double t = threshold_discounted(discounted(ch, m, beta)).omega_star;
        EXPECT_GE(t, previous - 1e-9);
        previous = t;
      }
    }
  }
}

TEST(SubsidyBanditProperty, ValueConvexAndPassiveTimeMonotoneInSubsidy) {
  ChannelGen gen(24);
  for (int i = 0; i < 10; ++i) {
    const auto ch = gen.channel();
    const double beta = gen.uniform(0.3, 0.95);
    for (double w : unit_grid(6)) {
      std::vector<double> v, d;
      for (double m = -0.1; m <= 1.1; m += 0.01) {
        const auto p = discounted(ch, m, beta);
        const auto c = solve(p);
        v.push_back(value_at(p, c.th, c.anchors, w));
        d.push_back(passive_time_at(p, c.th, c.anchors, w));
      }
      for (std::size_t k = 1; k + 1 < v.size(); ++k) {
        EXPECT_LE(v[k], 0.5 * (v[k - 1] + v[k + 1]) + 1e-9);
        EXPECT_GE(d[k], d[k - 1] - 1e-9);
      }
    }
  }
}

TEST(SubsidyBanditProperty, ValueBoundedness) {
  ChannelGen gen(25);
  for (int i = 0; i < 30; ++i) {
    const auto ch = gen.channel(0.02);
    const double c = std::max(2.0 / (1.0 - ch.p11()), 2.0 / ch.p01());
    for (double beta : {0.5, 0.9, 0.99}) {
      for (double m : {-0.2, 0.2, 0.5, 0.8, 1.1}) {
        const auto p = discounted(ch, m, beta);
        const auto s = solve(p);
        double lo = 1e300, hi = -1e300;
        for (double w : unit_grid(21)) {
          const double v = value_at(p, s.th, s.anchors, w);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        EXPECT_LE(hi - lo, c + 1.0);
      }
    }
  }
}

TEST(SubsidyBanditProperty, AnchorsAreFixedPointsOfTheValueEquation) {
  ChannelGen gen(26);
  for (int i = 0; i < 200; ++i) {
    const auto ch = gen.channel(0.05, true);
    const double beta = gen.uniform(0.1, 0.97);
    const double m = gen.uniform(-0.1, 1.1);
    const auto p = discounted(ch, m, beta);
    const auto s = solve(p);
    EXPECT_NEAR(value_at(p, s.th, s.anchors, ch.p01()), s.anchors.v_p01, 1e-9 * (1 + s.anchors.v_p01));
    EXPECT_NEAR(value_at(p, s.th, s.anchors, ch.p11()), s.anchors.v_p11, 1e-9 * (1 + s.anchors.v_p11));
    EXPECT_NEAR(passive_time_at(p, s.th, s.anchors, ch.p01()), s.anchors.d_p01, 1e-9 * (1 + s.anchors.d_p01));
    EXPECT_NEAR(passive_time_at(p, s.th, s.anchors, ch.p11()), s.anchors.d_p11, 1e-9 * (1 + s.anchors.d_p11));
    // Bellman: V(w) = max(active, passive) everywhere.
    for (double w : unit_grid(11)) {
      const auto q = action_values_at(p, s.th, s.anchors, w);
      EXPECT_NEAR(value_at(p, s.th, s.anchors, w), std::max(q.active, q.passive), 1e-9 * (1 + std::fabs(q.active)));
    }
  }
}

TEST(SubsidyBanditProperty, OracleEquivalenceGrid) {
  // 20 channels x 3 beta x 11 m x 101 omega.
  ChannelGen gen(27);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto ch = gen.channel(0.05, true);
    for (double beta : {0.5, 0.8, 0.95}) {
      ValueIterationOracle oracle(ch, beta, 0.5, 1e-9);
      for (int k = 0; k <= 10; ++k) {
        const double m = -0.1 + (ch.bandwidth() + 0.2) * k / 10.0;
        oracle.solve(m);
        const auto p = discounted(ch, m, beta);
        const auto s = solve(p);
        for (double w : unit_grid(101)) {
          worst = std::max(worst, std::fabs(value_at(p, s.th, s.anchors, w) - oracle.value_at(w)));
        }
      }
    }
  }
  EXPECT_LE(worst, 1e-6);
}
