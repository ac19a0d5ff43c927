#pragma once

#include <utility>

#include "whittle/channel_model.hpp"
#include "whittle/criterion.hpp"

namespace whittle {

/// Single arm with a constant subsidy `subsidy` paid for every passive slot.
struct SubsidyProblem {
  ChannelModel channel;
  double subsidy;
  Criterion criterion;
};

enum class ThresholdKind { kAlwaysActive, kAlwaysPassive, kInterior };

/**
 * Optimal single-arm policy: passive iff omega <= omega_star.
 *
 * kAlwaysActive stands for a threshold below 0 and kAlwaysPassive for one
 * above 1; omega_star is only meaningful for kInterior.
 */
struct ThresholdResult {
  ThresholdKind kind;
  BeliefState omega_star = 0.0;

  static ThresholdResult always_active() noexcept { return {ThresholdKind::kAlwaysActive, -1.0}; }
  static ThresholdResult always_passive() noexcept { return {ThresholdKind::kAlwaysPassive, 2.0}; }
  static ThresholdResult interior(BeliefState w) noexcept { return {ThresholdKind::kInterior, w}; }
};

/// Value and discounted passive time at the two anchor beliefs p01 and p11.
struct AnchorValues {
  double v_p01;
  double v_p11;
  double d_p01;
  double d_p11;
};

/// Bisection tolerance on the threshold belief.
inline constexpr double kThresholdTolerance = 1e-10;

// Discounted criterion. All of these throw std::invalid_argument when the
// problem does not carry a Discounted criterion.

ThresholdResult threshold_discounted(const SubsidyProblem& p);

/// Throws InconsistentThreshold if `th` is not the threshold of `p`.
AnchorValues anchor_values_discounted(const SubsidyProblem& p, const ThresholdResult& th);

/// V_{beta,m}(omega).
double value_at(const SubsidyProblem& p, const ThresholdResult& th, const AnchorValues& anchors,
                BeliefState omega);

/// D_{beta,m}(omega): discounted passive time, the right derivative of value_at in m.
double passive_time_at(const SubsidyProblem& p, const ThresholdResult& th, const AnchorValues& anchors,
                       BeliefState omega);

/// Both actions' values at omega under the optimal continuation.
struct ActionValues {
  double active;
  double passive;
};
ActionValues action_values_at(const SubsidyProblem& p, const ThresholdResult& th, const AnchorValues& anchors,
                              BeliefState omega);

/// Convenience: threshold, anchors and V/D at one belief.
struct ArmEvaluation {
  double value;
  double passive_time;
};
ArmEvaluation evaluate_arm(const SubsidyProblem& p, BeliefState omega);

// Average criterion.

ThresholdResult threshold_average(const SubsidyProblem& p);

struct AverageValue {
  double reward_rate;    ///< J_m
  double passive_share;  ///< D_m, in [0, 1]
};
AverageValue average_value_passive(const SubsidyProblem& p, const ThresholdResult& th);

/// Dispatches on the problem's criterion.
ThresholdResult threshold(const SubsidyProblem& p);

}  // namespace whittle
