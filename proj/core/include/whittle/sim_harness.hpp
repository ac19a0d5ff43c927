#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "whittle/channel_model.hpp"
#include "whittle/criterion.hpp"
#include "whittle/policy_engine.hpp"

namespace whittle {

enum class PolicyKind { kWhittle, kMyopic, kQueue, kOptimalOracle, kRandom };

std::string_view policy_name(PolicyKind p) noexcept;
/// Accepts "whittle", "myopic", "queue", "optimal-oracle", "random".
std::optional<PolicyKind> parse_policy(std::string_view name) noexcept;

/// From slot `at_slot` (1-based) onward the true channels follow `channels`.
struct RegimeSwitch {
  int at_slot;
  std::vector<ChannelModel> channels;
};

struct SimConfig {
  std::vector<ChannelModel> channels;
  int K = 1;
  PolicyKind policy = PolicyKind::kWhittle;
  Criterion criterion = Discounted{0.9};
  int horizon = 100;
  int replications = 1000;
  std::uint64_t seed = 1;
  std::vector<BeliefState> initial_beliefs;  ///< empty: stationary
  double burn_in_fraction = 0.1;             ///< average criterion only
  std::optional<RegimeSwitch> regime_switch;
  bool record_trace = false;  ///< keep actions and rewards of replication 0
  unsigned threads = 0;       ///< 0: hardware concurrency
};

struct SimTrace {
  std::vector<Action> actions;
  std::vector<double> rewards;
  std::vector<Observations> observations;
};

struct SimResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<double> per_replication;
  SimConfig config;
  double truncation_bound = 0.0;  ///< discounted tail beyond the horizon
  std::optional<SimTrace> trace;
};

/**
 * Monte Carlo evaluation. Per replication the true initial states are
 * drawn from the initial beliefs, channels evolve by their Markov chains,
 * and the policy sees beliefs and observations only.
 *
 * Discounted: sum_{t<T} beta^t R(t). Average: mean reward per slot after
 * a burn-in. Results depend only on the config (each replication owns
 * its random substreams).
 */
SimResult simulate(const SimConfig& cfg);

/// Smallest horizon whose discounted tail beta^T K maxB / (1 - beta) is below `bound`.
int discounted_horizon(double beta, int K, double max_bandwidth, double bound = 1e-4);

struct IdenticalBounds {
  double lower;
  double upper;
  double eta_lower;
};

/// Reward-rate bracket and approximation-factor floor for the index policy
/// on N identical channels under the average criterion.
IdenticalBounds identical_channel_bounds(const ChannelModel& ch, int N, int K);

/// Mean number of consecutive slots a channel stays selected, starting
/// from belief `start_omega` when it is first chosen.
double expected_transmission_period(const ChannelModel& ch, BeliefState start_omega);

/// Average reward implied by a mean transmission period for the queue policy.
double reward_rate_from_period(const ChannelModel& ch, int K, double mean_period);

double pairwise_sum(const double* values, std::size_t n) noexcept;

}  // namespace whittle
