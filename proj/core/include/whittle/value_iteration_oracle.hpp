#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "whittle/channel_model.hpp"

namespace whittle {

/**
 * Brute-force Bellman solver for the discounted single arm with subsidy.
 *
 * The state space is the belief set reachable from {omega, p01, p11}: each
 * of the three passive chains T^k(.) up to K_max with beta^K_max/(1-beta)
 * below the tolerance; the last element of each chain transitions to the
 * nearest reachable belief. Active actions lead to p11 or p01.
 *
 * Independent of the closed forms; meant for tests and cross-checks.
 * solve() warm-starts from the previous solution, which makes bisection
 * over the subsidy cheap.
 */
class ValueIterationOracle {
 public:
  ValueIterationOracle(const ChannelModel& ch, double beta, BeliefState omega, double tol);

  /// Solves for subsidy m; returns V(omega).
  double solve(double subsidy);

  /// Valid after solve().
  double value() const noexcept { return values_[0]; }
  double value_p01() const noexcept { return values_[p01_index_]; }
  double value_p11() const noexcept { return values_[p11_index_]; }
  /// Q(omega, active) - Q(omega, passive) for the last solved subsidy.
  double action_gap() const noexcept;
  /// Same gap at another belief, reusing the solved anchor values; the
  /// belief's passive chain is evaluated backward and closed like the others.
  double action_gap_at(BeliefState omega) const;
  /// V(omega) for any belief, reusing the solved anchor values.
  double value_at(BeliefState omega) const;

  std::size_t nearest_state(BeliefState b) const noexcept;
  // (active, passive) action values at an arbitrary belief.
  std::pair<double, double> action_values(BeliefState omega) const;

  std::size_t state_count() const noexcept { return beliefs_.size(); }
  int sweeps() const noexcept { return sweeps_; }

 private:
  ChannelModel ch_;
  double beta_;
  double tol_;
  double subsidy_ = 0.0;
  std::vector<double> beliefs_;
  std::vector<std::size_t> passive_next_;
  std::vector<double> values_;
  std::size_t p01_index_ = 0;
  std::size_t p11_index_ = 0;
  int sweeps_ = 0;
};

/// V_{beta,m}(omega) by value iteration, within `tol` of the true value.
double oracle_value_iteration(const ChannelModel& ch, double beta, double subsidy, BeliefState omega, double tol);

/// Whittle index by bisection on the subsidy, deciding each side with the oracle.
double oracle_index(const ChannelModel& ch, double beta, BeliefState omega, double tol, int iterations = 40);

}  // namespace whittle
