#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "whittle/channel_model.hpp"
#include "whittle/criterion.hpp"

namespace whittle {

using BeliefVector = std::vector<BeliefState>;
/// Sensing outcome per sensed channel id: 1 good, 0 bad.
using Observations = std::map<std::size_t, int>;

/// Channel ids are 0-based inside the library.
struct Action {
  std::vector<std::size_t> sensed;  ///< ascending
  friend bool operator==(const Action&, const Action&) = default;
};

/// Throws ObservationMismatch unless observation keys equal action.sensed.
BeliefVector joint_belief_update(const std::vector<ChannelModel>& models, const BeliefVector& beliefs,
                                 const Action& action, const Observations& observations);

/// Top-K by index. Equal indices fall back to expected immediate reward,
/// then to the lowest id.
Action select_whittle(const std::vector<ChannelModel>& models, const BeliefVector& beliefs, int K,
                      const Criterion& criterion);

/// Top-K by omega_i * B_i, lowest id first on ties.
Action select_myopic(const std::vector<ChannelModel>& models, const BeliefVector& beliefs, int K);

/**
 * Channel ordering that realises the index policy for stochastically
 * identical channels. It never sees transition probabilities: only the
 * initial belief ranking and the correlation sign.
 */
struct QueueState {
  std::vector<std::size_t> order;  ///< head first
  int correlation_sign = +1;
  friend bool operator==(const QueueState&, const QueueState&) = default;
};

/// Descending initial belief, lowest id first on ties.
QueueState queue_init(const BeliefVector& beliefs, int correlation_sign);
/// Same, after checking that all models are identical (NotIdentical otherwise).
QueueState queue_init(const std::vector<ChannelModel>& models, const BeliefVector& beliefs);

/// The first K ids of the queue.
Action queue_head(const QueueState& q, int K);

/// Throws ObservationMismatch unless observations cover exactly the head K ids.
QueueState queue_step(const QueueState& q, int K, const Observations& observations);

/// Largest horizon and channel count accepted by the exhaustive oracle.
inline constexpr int kBruteForceMaxHorizon = 12;
inline constexpr std::size_t kBruteForceMaxChannels = 4;

/**
 * Exact finite-horizon optimum by expectimax over actions and
 * observations, memoised on (steps left, belief vector). beta = 1 gives the
 * total (undiscounted) reward. Throws TooLarge past the size limits.
 */
class BruteForceSolver {
 public:
  BruteForceSolver(std::vector<ChannelModel> models, int K, double beta);

  double value(const BeliefVector& beliefs, int steps_left);
  Action best_action(const BeliefVector& beliefs, int steps_left);
  std::size_t memo_size() const noexcept { return memo_.size(); }

 private:
  double action_value(const BeliefVector& beliefs, const Action& a, int steps_left);

  std::vector<ChannelModel> models_;
  int K_;
  double beta_;
  std::vector<Action> actions_;
  std::map<std::pair<int, BeliefVector>, double> memo_;
};

double optimal_value_bruteforce(const std::vector<ChannelModel>& models, const BeliefVector& beliefs, int K,
                                double beta, int horizon);

}  // namespace whittle
