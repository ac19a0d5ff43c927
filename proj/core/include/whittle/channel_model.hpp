#pragma once

#include <cstdint>
#include <limits>

namespace whittle {

/// Conditional probability that a channel is in the good state.
using BeliefState = double;

enum class Correlation { kPositive, kNegative };

/**
 * Two-state Gilbert-Elliot channel.
 *
 * State 1 is "good" and pays `bandwidth` units of reward when sensed;
 * state 0 pays nothing. Transitions are p01 (bad -> good) and
 * p11 (good -> good). Both must lie strictly inside (0, 1).
 *
 * p11 == p01 (memoryless) is classified as positively correlated.
 */
class ChannelModel {
 public:
  /// Throws AbsorbingChain or BadBandwidth (both InvalidChannel).
  ChannelModel(double p01, double p11, double bandwidth = 1.0);

  double p01() const noexcept { return p01_; }
  double p11() const noexcept { return p11_; }
  double p10() const noexcept { return 1.0 - p11_; }
  double p00() const noexcept { return 1.0 - p01_; }
  double bandwidth() const noexcept { return bandwidth_; }

  Correlation correlation() const noexcept {
    return p11_ >= p01_ ? Correlation::kPositive : Correlation::kNegative;
  }
  int correlation_sign() const noexcept { return positively_correlated() ? +1 : -1; }
  bool positively_correlated() const noexcept { return p11_ >= p01_; }

  friend bool operator==(const ChannelModel&, const ChannelModel&) = default;

 private:
  double p01_;
  double p11_;
  double bandwidth_;
};

ChannelModel validate_channel(double p01, double p11, double bandwidth);

/// Number of passive slots before a belief first exceeds a level.
/// Infinite is its own state, never an encoded float or a huge integer.
class CrossingTime {
 public:
  static constexpr CrossingTime finite(std::uint64_t steps) noexcept { return CrossingTime(steps, false); }
  static constexpr CrossingTime infinite() noexcept { return CrossingTime(0, true); }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr bool is_finite() const noexcept { return !infinite_; }
  /// Precondition: is_finite().
  constexpr std::uint64_t steps() const noexcept { return steps_; }

  friend constexpr bool operator==(const CrossingTime&, const CrossingTime&) = default;

 private:
  constexpr CrossingTime(std::uint64_t steps, bool infinite) noexcept : steps_(steps), infinite_(infinite) {}
  std::uint64_t steps_;
  bool infinite_;
};

/// T(w) = w p11 + (1 - w) p01.
BeliefState one_step_update(const ChannelModel& ch, BeliefState omega) noexcept;

/// T^k(w) evaluated in closed form (not by iteration).
BeliefState k_step_update(const ChannelModel& ch, BeliefState omega, std::uint64_t k) noexcept;

/// Fixed point of one_step_update: p01 / (p01 + p10).
BeliefState stationary_belief(const ChannelModel& ch) noexcept;

/// min{k : T^k(omega) > level}. Equality with `level` counts as not crossed.
CrossingTime crossing_time(const ChannelModel& ch, BeliefState omega, BeliefState level);

}  // namespace whittle
