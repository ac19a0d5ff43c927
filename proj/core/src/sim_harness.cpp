#include "whittle/sim_harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "whittle/errors.hpp"
#include "whittle/rng.hpp"

namespace whittle {

std::string_view policy_name(PolicyKind p) noexcept {
  switch (p) {
    case PolicyKind::kWhittle:
      return "whittle";
    case PolicyKind::kMyopic:
      return "myopic";
    case PolicyKind::kQueue:
      return "queue";
    case PolicyKind::kOptimalOracle:
      return "optimal-oracle";
    case PolicyKind::kRandom:
      return "random";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy(std::string_view name) noexcept {
  for (auto p : {PolicyKind::kWhittle, PolicyKind::kMyopic, PolicyKind::kQueue, PolicyKind::kOptimalOracle,
                 PolicyKind::kRandom}) {
    if (policy_name(p) == name) return p;
  }
  return std::nullopt;
}

double pairwise_sum(const double* values, std::size_t n) noexcept {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += values[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

namespace {

double max_bandwidth(const std::vector<ChannelModel>& channels) {
  double b = 0.0;
  for (const auto& ch : channels) b = std::max(b, ch.bandwidth());
  return b;
}

std::vector<BeliefState> start_beliefs(const SimConfig& cfg) {
  if (!cfg.initial_beliefs.empty()) return cfg.initial_beliefs;
  std::vector<BeliefState> out;
  for (const auto& ch : cfg.channels) out.push_back(stationary_belief(ch));
  return out;
}

void validate(const SimConfig& cfg) {
  const std::size_t n = cfg.channels.size();
  if (n == 0) throw std::invalid_argument("at least one channel is required");
  if (cfg.K < 1 || static_cast<std::size_t>(cfg.K) > n) throw std::invalid_argument("K must lie in [1, N]");
  if (cfg.horizon < 1) throw std::invalid_argument("horizon must be positive");
  if (cfg.replications < 1) throw std::invalid_argument("replications must be positive");
  validate_criterion(cfg.criterion);
  if (!cfg.initial_beliefs.empty() && cfg.initial_beliefs.size() != n) {
    throw std::invalid_argument("one initial belief per channel is required");
  }
  for (double w : cfg.initial_beliefs) {
    if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("initial beliefs must lie in [0, 1]");
  }
  if (!(cfg.burn_in_fraction >= 0.0 && cfg.burn_in_fraction < 1.0)) {
    throw std::invalid_argument("burn-in fraction must lie in [0, 1)");
  }
  if (cfg.regime_switch) {
    if (cfg.regime_switch->channels.size() != n) throw std::invalid_argument("regime switch must keep N channels");
    if (cfg.policy == PolicyKind::kOptimalOracle) {
      throw std::invalid_argument("the optimal oracle does not support regime switches");
    }
  }
  if (cfg.policy == PolicyKind::kQueue) {
    queue_init(cfg.channels, start_beliefs(cfg));
    if (cfg.regime_switch) queue_init(cfg.regime_switch->channels, start_beliefs(cfg));
  }
  if (cfg.policy == PolicyKind::kOptimalOracle) {
    if (n > kBruteForceMaxChannels) throw TooLarge("optimal oracle supports at most 4 channels");
    if (cfg.horizon > kBruteForceMaxHorizon) throw TooLarge("optimal oracle supports horizons up to 12");
  }
}

class Replicator {
 public:
  explicit Replicator(const SimConfig& cfg) : cfg_(cfg), start_(start_beliefs(cfg)) {
    if (const auto* d = std::get_if<Discounted>(&cfg.criterion)) beta_ = d->beta;
    if (cfg.policy == PolicyKind::kOptimalOracle) {
      solver_.emplace(cfg.channels, cfg.K, is_average(cfg.criterion) ? 1.0 : beta_);
    }
  }

  double run(std::uint64_t replication, SimTrace* trace) {
    SplitMix64 nature(SplitMix64::substream(cfg_.seed, replication, 0));
    SplitMix64 chooser(SplitMix64::substream(cfg_.seed, replication, 1));
    const std::size_t n = cfg_.channels.size();

    BeliefVector beliefs = start_;
    std::vector<int> states(n);
    for (std::size_t i = 0; i < n; ++i) states[i] = nature.bernoulli(beliefs[i]);
    std::optional<QueueState> queue;
    if (cfg_.policy == PolicyKind::kQueue) queue = queue_init(beliefs, cfg_.channels.front().correlation_sign());

    const int burn = static_cast<int>(std::floor(cfg_.horizon * cfg_.burn_in_fraction));
    double total = 0.0;
    double discount = 1.0;
    for (int t = 1; t <= cfg_.horizon; ++t) {
      const auto& models = models_at(t);
      const Action a = choose(models, beliefs, queue, chooser, cfg_.horizon - t + 1);

      double reward = 0.0;
      Observations obs;
      for (std::size_t id : a.sensed) {
        reward += states[id] * models[id].bandwidth();
        obs.emplace(id, states[id]);
      }
      if (is_average(cfg_.criterion)) {
        if (t > burn) total += reward;
      } else {
        total += discount * reward;
        discount *= beta_;
      }
      if (trace) {
        trace->actions.push_back(a);
        trace->rewards.push_back(reward);
        trace->observations.push_back(obs);
      }

      const auto& next_models = models_at(t + 1);
      beliefs = joint_belief_update(next_models, beliefs, a, obs);
      if (queue) *queue = queue_step(*queue, cfg_.K, obs);
      for (std::size_t i = 0; i < n; ++i) {
        states[i] = nature.bernoulli(states[i] ? next_models[i].p11() : next_models[i].p01());
      }
    }
    if (is_average(cfg_.criterion)) return total / (cfg_.horizon - burn);
    return total;
  }

 private:
  const std::vector<ChannelModel>& models_at(int t) const {
    if (cfg_.regime_switch && t >= cfg_.regime_switch->at_slot) return cfg_.regime_switch->channels;
    return cfg_.channels;
  }

  Action choose(const std::vector<ChannelModel>& models, const BeliefVector& beliefs,
                const std::optional<QueueState>& queue, SplitMix64& chooser, int steps_left) {
    switch (cfg_.policy) {
      case PolicyKind::kWhittle:
        return select_whittle(models, beliefs, cfg_.K, cfg_.criterion);
      case PolicyKind::kMyopic:
        return select_myopic(models, beliefs, cfg_.K);
      case PolicyKind::kQueue:
        return queue_head(*queue, cfg_.K);
      case PolicyKind::kOptimalOracle:
        return solver_->best_action(beliefs, steps_left);
      case PolicyKind::kRandom:
        break;
    }
    // Partial Fisher-Yates draw of K ids.
    std::vector<std::size_t> ids(models.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    for (int k = 0; k < cfg_.K; ++k) {
      const std::size_t span = ids.size() - k;
      const auto pick = k + static_cast<std::size_t>(chooser.uniform() * static_cast<double>(span));
      std::swap(ids[k], ids[std::min(pick, ids.size() - 1)]);
    }
    Action a{{ids.begin(), ids.begin() + cfg_.K}};
    std::sort(a.sensed.begin(), a.sensed.end());
    return a;
  }

  const SimConfig& cfg_;
  BeliefVector start_;
  double beta_ = 0.0;
  std::optional<BruteForceSolver> solver_;
};

}  // namespace

SimResult simulate(const SimConfig& cfg) {
  validate(cfg);
  SimResult result;
  result.config = cfg;
  const auto reps = static_cast<std::size_t>(cfg.replications);
  result.per_replication.assign(reps, 0.0);

  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, reps));

  SimTrace trace;
  auto work = [&](unsigned worker) {
    Replicator rep(cfg);
    for (std::size_t r = worker; r < reps; r += threads) {
      SimTrace* t = (cfg.record_trace && r == 0) ? &trace : nullptr;
      result.per_replication[r] = rep.run(r, t);
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  if (cfg.record_trace) result.trace = std::move(trace);

  const double n = static_cast<double>(reps);
  result.mean = pairwise_sum(result.per_replication.data(), reps) / n;
  if (reps > 1) {
    std::vector<double> sq(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      const double d = result.per_replication[r] - result.mean;
      sq[r] = d * d;
    }
    result.std_error = std::sqrt(pairwise_sum(sq.data(), reps) / (n - 1.0) / n);
  }
  if (const auto* d = std::get_if<Discounted>(&cfg.criterion)) {
    result.truncation_bound =
        std::pow(d->beta, cfg.horizon) * cfg.K * max_bandwidth(cfg.channels) / (1.0 - d->beta);
  }
  return result;
}

int discounted_horizon(double beta, int K, double max_bandwidth, double bound) {
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("discount factor must lie in [0, 1)");
  if (beta == 0.0) return 1;
  const double scale = K * max_bandwidth / (1.0 - beta);
  int T = 1;
  while (std::pow(beta, T) * scale >= bound) ++T;
  return T;
}

IdenticalBounds identical_channel_bounds(const ChannelModel& ch, int N, int K) {
  if (N < 1 || K < 1 || K > N) throw std::invalid_argument("need 1 <= K <= N");
  const double p01 = ch.p01();
  const double p11 = ch.p11();
  const double wo = stationary_belief(ch);
  const auto rounds = static_cast<std::uint64_t>(N / K);
  const double k = K;
  IdenticalBounds b{};
  if (ch.positively_correlated()) {
    const double x = k_step_update(ch, p01, rounds - 1);
    b.lower = k * x / (1.0 - p11 + x);
    b.upper = std::min(k * wo / (1.0 - p11 + wo), N * wo);
  } else {
    const double tp = one_step_update(ch, p11);
    b.lower = k * p01 / (1.0 - k_step_update(ch, p11, 2 * rounds - 2) + p01);
    b.upper = std::min(k * p01 / (1.0 - tp + p01), N * wo);
  }
  const bool optimal = K == N || K == N - 1 || (K == 1 && ch.positively_correlated());
  if (optimal) {
    b.eta_lower = 1.0;
  } else if (ch.positively_correlated()) {
    b.eta_lower = std::max(k / N, 1.0 - p11 + wo);
  } else {
    const double tp = one_step_update(ch, p11);
    b.eta_lower = std::max({0.5, k / N, (1.0 - tp + p01) / (1.0 - p11 + p01)});
  }
  b.lower *= ch.bandwidth();
  b.upper *= ch.bandwidth();
  return b;
}

double expected_transmission_period(const ChannelModel& ch, BeliefState start_omega) {
  // Positive: stays while good, P(tau = 1) = 1 - w, then geometric in p10.
  // Negative: stays while bad, P(tau = 1) = w, then geometric in p01.
  if (ch.positively_correlated()) return 1.0 + start_omega / ch.p10();
  return 1.0 + (1.0 - start_omega) / ch.p01();
}

double reward_rate_from_period(const ChannelModel& ch, int K, double mean_period) {
  const double share = ch.positively_correlated() ? 1.0 - 1.0 / mean_period : 1.0 / mean_period;
  return K * share * ch.bandwidth();
}

}  // namespace whittle
