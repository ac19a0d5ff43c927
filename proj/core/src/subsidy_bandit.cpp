#include "whittle/subsidy_bandit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "whittle/errors.hpp"
#include "whittle/whittle_index.hpp"

namespace whittle {

namespace {

double beta_of(const SubsidyProblem& p) {
  const auto* d = std::get_if<Discounted>(&p.criterion);
  if (!d) throw std::invalid_argument("expected a discounted criterion");
  validate_criterion(p.criterion);
  return d->beta;
}

ThresholdKind expected_kind(const SubsidyProblem& p) {
  if (p.subsidy < 0.0) return ThresholdKind::kAlwaysActive;
  if (p.subsidy >= p.channel.bandwidth()) return ThresholdKind::kAlwaysPassive;
  return ThresholdKind::kInterior;
}

// sup{w in [0, 1] : W(w) <= m} for a nondecreasing index with W(0) <= m < W(1).
ThresholdResult invert_index(const SubsidyProblem& p) {
  const ThresholdKind kind = expected_kind(p);
  if (kind == ThresholdKind::kAlwaysActive) return ThresholdResult::always_active();
  if (kind == ThresholdKind::kAlwaysPassive) return ThresholdResult::always_passive();
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kThresholdTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (whittle_index(p.channel, p.criterion, mid) <= p.subsidy) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return ThresholdResult::interior(lo);
}

/**
 * The optimal single-arm policy seen through its passive set. Decisions are
 * made on the index itself (passive iff W(b) <= m, the tie going to passive),
 * so a belief that lands within bisection tolerance of omega* is still
 * classified exactly.
 */
class PassiveSet {
 public:
  PassiveSet(const SubsidyProblem& p, const ThresholdResult& th) : p_(p), th_(th) {
    if (th.kind != expected_kind(p)) throw InconsistentThreshold("threshold kind does not match the subsidy regime");
    if (th.kind != ThresholdKind::kInterior) return;
    const double w = th.omega_star;
    constexpr double kSlack = 1e-8;
    const bool below_ok = w - kSlack < 0.0 || passive(w - kSlack);
    const bool above_ok = w + kSlack > 1.0 || !passive(w + kSlack);
    if (!(w >= 0.0 && w <= 1.0) || !below_ok || !above_ok) {
      throw InconsistentThreshold("threshold " + std::to_string(w) + " is not optimal for subsidy " +
                                  std::to_string(p.subsidy));
    }
  }

  bool passive(BeliefState b) const {
    switch (th_.kind) {
      case ThresholdKind::kAlwaysActive:
        return false;
      case ThresholdKind::kAlwaysPassive:
        return true;
      case ThresholdKind::kInterior:
        break;
    }
    return whittle_index(p_.channel, p_.criterion, b) <= p_.subsidy;
  }

  /// Passive slots spent from `omega` before the first activation.
  CrossingTime crossing(BeliefState omega) const {
    const ChannelModel& ch = p_.channel;
    if (!passive(omega)) return CrossingTime::finite(0);
    if (!ch.positively_correlated()) {
      return passive(one_step_update(ch, omega)) ? CrossingTime::infinite() : CrossingTime::finite(1);
    }
    const double wo = stationary_belief(ch);
    if (omega >= wo || passive(wo)) return CrossingTime::infinite();

    // The orbit rises monotonically towards omega_o, so passive(T^k) flips
    // once. Start from the closed-form crossing time and settle on the index.
    auto active_after = [&](std::uint64_t k) { return !passive(k_step_update(ch, omega, k)); };
    const CrossingTime hint = crossing_time(ch, omega, th_.omega_star);
    std::uint64_t hi = hint.is_finite() ? std::max<std::uint64_t>(hint.steps(), 1) : 1;
    std::uint64_t lo = 0;
    if (active_after(hi)) {
      if (!active_after(hi - 1)) return CrossingTime::finite(hi);
    } else {
      lo = hi;
      do {
        if (hi > (std::uint64_t{1} << 40)) return CrossingTime::infinite();
        lo = hi;
        hi *= 2;
      } while (!active_after(hi));
    }
    while (hi - lo > 1) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (active_after(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return CrossingTime::finite(hi);
  }

 private:
  const SubsidyProblem& p_;
  ThresholdResult th_;
};

}  // namespace

ThresholdResult threshold_discounted(const SubsidyProblem& p) {
  beta_of(p);
  return invert_index(p);
}

ThresholdResult threshold_average(const SubsidyProblem& p) {
  if (!is_average(p.criterion)) throw std::invalid_argument("expected the average criterion");
  return invert_index(p);
}

ThresholdResult threshold(const SubsidyProblem& p) {
  validate_criterion(p.criterion);
  return invert_index(p);
}

AnchorValues anchor_values_discounted(const SubsidyProblem& p, const ThresholdResult& th) {
  const double b = beta_of(p);
  const PassiveSet set(p, th);
  const ChannelModel& ch = p.channel;
  const double p01 = ch.p01();
  const double p11 = ch.p11();
  const double bw = ch.bandwidth();
  const double m = p.subsidy / bw;  // unit-bandwidth subsidy
  const double always_v = m / (1.0 - b);
  const double always_d = 1.0 / (1.0 - b);

  double v01, v11, d01, d11;
  if (ch.positively_correlated()) {
    if (!set.passive(p01)) {
      v01 = p01 / ((1.0 - b) * (1.0 - b * p11 + b * p01));
      d01 = 0.0;
    } else if (!set.passive(stationary_belief(ch))) {
      const auto L = set.crossing(p01).steps();
      const double x = k_step_update(ch, p01, L);
      const double bL = std::pow(b, static_cast<double>(L));
      const double den =
          (1.0 - b * p11) * (1.0 - b) * (1.0 - bL * b) + (1.0 - b) * (1.0 - b) * bL * b * x;
      v01 = ((1.0 - b * p11) * (1.0 - bL) * m + (1.0 - b) * bL * x) / den;
      d01 = (1.0 - b * p11) * (1.0 - bL) / den;
    } else {
      v01 = always_v;
      d01 = always_d;
    }
    if (!set.passive(p11)) {
      v11 = (p11 + b * (1.0 - p11) * v01) / (1.0 - b * p11);
      d11 = b * (1.0 - p11) * d01 / (1.0 - b * p11);
    } else {
      v11 = always_v;
      d11 = always_d;
    }
  } else {
    const double tp = one_step_update(ch, p11);
    if (!set.passive(p11)) {
      v11 = (p11 * (1.0 - b) + b * p01) / ((1.0 - b) * (1.0 - b * p11 + b * p01));
      d11 = 0.0;
    } else if (!set.passive(tp)) {
      const double den = 1.0 - b * (1.0 - p01) - b * b * tp * (1.0 - b) - b * b * b * p01;
      v11 = (m * (1.0 - b * (1.0 - p01)) + b * tp * (1.0 - b) + b * b * p01) / den;
      d11 = (1.0 - b * (1.0 - p01)) / den;
    } else {
      v11 = always_v;
      d11 = always_d;
    }
    if (!set.passive(p01)) {
      v01 = (p01 + b * p01 * v11) / (1.0 - b * (1.0 - p01));
      d01 = b * p01 * d11 / (1.0 - b * (1.0 - p01));
    } else {
      v01 = always_v;
      d01 = always_d;
    }
  }
  return {v01 * bw, v11 * bw, d01, d11};
}

double value_at(const SubsidyProblem& p, const ThresholdResult& th, const AnchorValues& a, BeliefState omega) {
  const double b = beta_of(p);
  const PassiveSet set(p, th);
  const CrossingTime lt = set.crossing(omega);
  if (lt.is_infinite()) return p.subsidy / (1.0 - b);
  const double x = k_step_update(p.channel, omega, lt.steps());
  const double bL = std::pow(b, static_cast<double>(lt.steps()));
  return (1.0 - bL) / (1.0 - b) * p.subsidy +
         bL * (x * p.channel.bandwidth() + b * (x * a.v_p11 + (1.0 - x) * a.v_p01));
}

double passive_time_at(const SubsidyProblem& p, const ThresholdResult& th, const AnchorValues& a, BeliefState omega) {
  const double b = beta_of(p);
  const PassiveSet set(p, th);
  const CrossingTime lt = set.crossing(omega);
  if (lt.is_infinite()) return 1.0 / (1.0 - b);
  const double x = k_step_update(p.channel, omega, lt.steps());
  const double bL = std::pow(b, static_cast<double>(lt.steps()));
  return (1.0 - bL) / (1.0 - b) + bL * b * (x * a.d_p11 + (1.0 - x) * a.d_p01);
}

ActionValues action_values_at(const SubsidyProblem& p, const ThresholdResult& th, const AnchorValues& a,
                              BeliefState omega) {
  const double b = beta_of(p);
  const double active = omega * p.channel.bandwidth() + b * (omega * a.v_p11 + (1.0 - omega) * a.v_p01);
  const double passive = p.subsidy + b * value_at(p, th, a, one_step_update(p.channel, omega));
  return {active, passive};
}

ArmEvaluation evaluate_arm(const SubsidyProblem& p, BeliefState omega) {
  const ThresholdResult th = threshold_discounted(p);
  const AnchorValues a = anchor_values_discounted(p, th);
  return {value_at(p, th, a, omega), passive_time_at(p, th, a, omega)};
}

AverageValue average_value_passive(const SubsidyProblem& p, const ThresholdResult& th) {
  if (!is_average(p.criterion)) throw std::invalid_argument("expected the average criterion");
  const PassiveSet set(p, th);
  const ChannelModel& ch = p.channel;
  const double p01 = ch.p01();
  const double p11 = ch.p11();
  const double bw = ch.bandwidth();
  const double m = p.subsidy / bw;
  const double wo = stationary_belief(ch);

  if (ch.positively_correlated()) {
    if (!set.passive(p01)) return {wo * bw, 0.0};
    if (set.passive(wo)) return {p.subsidy, 1.0};
    const auto L = static_cast<double>(set.crossing(p01).steps());
    const double x = k_step_update(ch, p01, set.crossing(p01).steps());
    const double den = (1.0 - p11) * (L + 1.0) + x;
    return {((1.0 - p11) * L * m + x) / den * bw, (1.0 - p11) * L / den};
  }
  if (!set.passive(p11)) return {wo * bw, 0.0};
  const double tp = one_step_update(ch, p11);
  if (set.passive(tp)) return {p.subsidy, 1.0};
  const double den = 1.0 + 2.0 * p01 - tp;
  return {(p01 * m + p01) / den * bw, p01 / den};
}

}  // namespace whittle
