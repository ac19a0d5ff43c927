#pragma once

#include <optional>
#include <vector>

#include "whittle/channel_model.hpp"
#include "whittle/criterion.hpp"

namespace whittle {

struct IndexQuery {
  ChannelModel channel;
  BeliefState omega;
  Criterion criterion;
};

/// Closed-form discounted index W_beta(omega), scaled by the bandwidth.
double index_discounted(const ChannelModel& ch, double beta, BeliefState omega);
double index_discounted(const IndexQuery& q);

/// Closed-form average-reward index W(omega), scaled by the bandwidth.
double index_average(const ChannelModel& ch, BeliefState omega);
double index_average(const IndexQuery& q);

/// Dispatches on the criterion.
double whittle_index(const ChannelModel& ch, const Criterion& c, BeliefState omega);
inline double whittle_index(const IndexQuery& q) { return whittle_index(q.channel, q.criterion, q.omega); }

struct GrayArea {
  double low;
  double high;
};

/**
 * Subsidy values at which a channel's passive time (as a function of m)
 * can jump, for one initial belief.
 *
 * Positively correlated channels have infinitely many breakpoints
 * accumulating at W(omega_o); those within `delta` of it are replaced by
 * the gray area [low, W(omega_o)).
 */
struct BreakpointSet {
  std::vector<double> points;  ///< strictly increasing
  std::optional<GrayArea> gray_area;
};

BreakpointSet index_breakpoints(const ChannelModel& ch, double beta, BeliefState initial_omega, double delta);

/// Breakpoints of the average-criterion passive share D_m (no belief dependence).
BreakpointSet index_breakpoints_average(const ChannelModel& ch, double delta);

struct IndexabilityReport {
  double max_violation = 0.0;  ///< largest decrease of the threshold along the grid
  double worst_subsidy = 0.0;  ///< right end of the worst decrease
  std::size_t grid_points = 0;
  bool passed = false;
};

/**
 * Checks that m -> omega*_beta(m) is nondecreasing over a grid on
 * [-0.1, B + 0.1], where each threshold is located from the
 * value-iteration oracle alone (no closed forms involved).
 */
IndexabilityReport verify_indexability(const ChannelModel& ch, double beta, double m_grid_step);

}  // namespace whittle
