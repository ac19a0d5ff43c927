#pragma once

#include <utility>
#include <vector>

#include "whittle/channel_model.hpp"
#include "whittle/criterion.hpp"

namespace whittle {

/**
 * Relaxed problem: K channels active only on (discounted) average.
 * Empty initial_beliefs means stationary beliefs; the average criterion
 * ignores them.
 */
struct BoundRequest {
  std::vector<ChannelModel> channels;
  int K = 1;
  Criterion criterion = Discounted{0.9};
  std::vector<BeliefState> initial_beliefs;
  double epsilon = 1e-3;
};

struct BoundResult {
  double m_star = 0.0;  ///< reported minimiser m'
  double value = 0.0;   ///< relaxed objective at m'
  bool exact = false;   ///< m' is a true minimiser (not next to a gray area)
  Criterion criterion = Discounted{0.9};
};

/// Throws std::invalid_argument for K outside [1, N], epsilon <= 0, or a belief count mismatch.
void validate_request(const BoundRequest& req);

/// G(m) = sum_i V_i(omega_i(1)) - m (N - K) / (1 - beta).
double relaxed_objective(const BoundRequest& req, double m);

/// Right derivative of G: sum_i D_i(omega_i(1)) - (N - K) / (1 - beta). Nondecreasing in m.
double bound_subgradient(const BoundRequest& req, double m);

/// Average criterion: sum_i J_m^(i) - m (N - K) and its right derivative.
double relaxed_objective_average(const std::vector<ChannelModel>& channels, int K, double m);
double bound_subgradient_average(const std::vector<ChannelModel>& channels, int K, double m);

/// epsilon-accurate minimum of G via breakpoint enumeration with gray areas.
BoundResult upper_bound_discounted(const BoundRequest& req);

/// Bisection on the subgradient sign over [0, max bandwidth]. Never exact.
/// `trace`, when given, receives the (lo, hi) bracket after every iteration.
BoundResult upper_bound_bisection(const BoundRequest& req, int iters,
                                  std::vector<std::pair<double, double>>* trace = nullptr);

BoundResult upper_bound_average(const std::vector<ChannelModel>& channels, int K, double epsilon);

/// Dispatches on req.criterion.
BoundResult upper_bound(const BoundRequest& req);

}  // namespace whittle
