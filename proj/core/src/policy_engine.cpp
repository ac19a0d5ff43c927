#include "whittle/policy_engine.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

#include "whittle/errors.hpp"
#include "whittle/whittle_index.hpp"

namespace whittle {

namespace {

void check_selection(std::size_t n, std::size_t beliefs, int K) {
  if (n != beliefs) throw std::invalid_argument("one belief per channel is required");
  if (K < 1 || static_cast<std::size_t>(K) > n) throw std::invalid_argument("K must lie in [1, N]");
}

// Ranks ids by (primary desc, secondary desc, id asc) and keeps the first K.
Action top_k(const std::vector<double>& primary, const std::vector<double>& secondary, int K) {
  std::vector<std::size_t> ids(primary.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::partial_sort(ids.begin(), ids.begin() + K, ids.end(), [&](std::size_t a, std::size_t b) {
    if (primary[a] != primary[b]) return primary[a] > primary[b];
    if (secondary[a] != secondary[b]) return secondary[a] > secondary[b];
    return a < b;
  });
  Action out{{ids.begin(), ids.begin() + K}};
  std::sort(out.sensed.begin(), out.sensed.end());
  return out;
}

void check_observations(const std::vector<std::size_t>& expected, const Observations& obs) {
  std::vector<std::size_t> sorted = expected;
  std::sort(sorted.begin(), sorted.end());
  if (obs.size() != sorted.size()) throw ObservationMismatch("observations do not match the sensed set");
  std::size_t k = 0;
  for (const auto& [id, value] : obs) {
    if (id != sorted[k++]) throw ObservationMismatch("observation for an unsensed channel");
    if (value != 0 && value != 1) throw ObservationMismatch("observations must be 0 or 1");
  }
}

}  // namespace

BeliefVector joint_belief_update(const std::vector<ChannelModel>& models, const BeliefVector& beliefs,
                                 const Action& action, const Observations& observations) {
  if (models.size() != beliefs.size()) throw std::invalid_argument("one belief per channel is required");
  check_observations(action.sensed, observations);
  BeliefVector next(beliefs.size());
  for (std::size_t i = 0; i < beliefs.size(); ++i) next[i] = one_step_update(models[i], beliefs[i]);
  for (const auto& [id, good] : observations) next[id] = good ? models[id].p11() : models[id].p01();
  return next;
}

Action select_whittle(const std::vector<ChannelModel>& models, const BeliefVector& beliefs, int K,
                      const Criterion& criterion) {
  check_selection(models.size(), beliefs.size(), K);
  std::vector<double> index(models.size());
  std::vector<double> reward(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) {
    index[i] = whittle_index(models[i], criterion, beliefs[i]);
    reward[i] = beliefs[i] * models[i].bandwidth();
  }
  return top_k(index, reward, K);
}

Action select_myopic(const std::vector<ChannelModel>& models, const BeliefVector& beliefs, int K) {
  check_selection(models.size(), beliefs.size(), K);
  std::vector<double> reward(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) reward[i] = beliefs[i] * models[i].bandwidth();
  return top_k(reward, reward, K);
}

QueueState queue_init(const BeliefVector& beliefs, int correlation_sign) {
  if (beliefs.empty()) throw std::invalid_argument("queue needs at least one channel");
  if (correlation_sign != 1 && correlation_sign != -1) throw std::invalid_argument("correlation sign must be +1 or -1");
  QueueState q;
  q.correlation_sign = correlation_sign;
  q.order.resize(beliefs.size());
  std::iota(q.order.begin(), q.order.end(), std::size_t{0});
  std::stable_sort(q.order.begin(), q.order.end(),
                   [&](std::size_t a, std::size_t b) { return beliefs[a] > beliefs[b]; });
  return q;
}

QueueState queue_init(const std::vector<ChannelModel>& models, const BeliefVector& beliefs) {
  if (models.empty()) throw std::invalid_argument("queue needs at least one channel");
  if (models.size() != beliefs.size()) throw std::invalid_argument("one belief per channel is required");
  for (const auto& m : models) {
    if (!(m == models.front())) throw NotIdentical("queue policy needs stochastically identical channels");
  }
  return queue_init(beliefs, models.front().correlation_sign());
}

Action queue_head(const QueueState& q, int K) {
  if (K < 1 || static_cast<std::size_t>(K) > q.order.size()) throw std::invalid_argument("K must lie in [1, N]");
  Action a{{q.order.begin(), q.order.begin() + K}};
  std::sort(a.sensed.begin(), a.sensed.end());
  return a;
}

QueueState queue_step(const QueueState& q, int K, const Observations& observations) {
  if (K < 1 || static_cast<std::size_t>(K) > q.order.size()) throw std::invalid_argument("K must lie in [1, N]");
  const std::vector<std::size_t> head(q.order.begin(), q.order.begin() + K);
  check_observations(head, observations);

  std::vector<std::size_t> good, bad;
  for (std::size_t id : head) (observations.at(id) ? good : bad).push_back(id);
  std::vector<std::size_t> rest(q.order.begin() + K, q.order.end());

  QueueState out;
  out.correlation_sign = q.correlation_sign;
  out.order.reserve(q.order.size());
  if (q.correlation_sign > 0) {
    out.order.insert(out.order.end(), good.begin(), good.end());
    out.order.insert(out.order.end(), rest.begin(), rest.end());
    out.order.insert(out.order.end(), bad.begin(), bad.end());
  } else {
    out.order.insert(out.order.end(), bad.begin(), bad.end());
    out.order.insert(out.order.end(), rest.rbegin(), rest.rend());
    out.order.insert(out.order.end(), good.begin(), good.end());
  }
  return out;
}

BruteForceSolver::BruteForceSolver(std::vector<ChannelModel> models, int K, double beta)
    : models_(std::move(models)), K_(K), beta_(beta) {
  const std::size_t n = models_.size();
  if (n > kBruteForceMaxChannels) throw TooLarge("exhaustive search supports at most 4 channels");
  if (K < 1 || static_cast<std::size_t>(K) > n) throw std::invalid_argument("K must lie in [1, N]");
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("discount factor must lie in [0, 1]");
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != K) continue;
    Action a;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) a.sensed.push_back(i);
    }
    actions_.push_back(std::move(a));
  }
  // Lexicographic order keeps best_action's tie-break on the lowest ids.
  std::sort(actions_.begin(), actions_.end(), [](const Action& x, const Action& y) { return x.sensed < y.sensed; });
}

double BruteForceSolver::action_value(const BeliefVector& beliefs, const Action& a, int steps_left) {
  double immediate = 0.0;
  for (std::size_t id : a.sensed) immediate += beliefs[id] * models_[id].bandwidth();
  if (steps_left <= 1) return immediate;

  BeliefVector next(beliefs.size());
  for (std::size_t i = 0; i < beliefs.size(); ++i) next[i] = one_step_update(models_[i], beliefs[i]);
  double future = 0.0;
  const std::size_t k = a.sensed.size();
  for (unsigned outcome = 0; outcome < (1u << k); ++outcome) {
    double prob = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t id = a.sensed[j];
      const bool good = outcome & (1u << j);
      prob *= good ? beliefs[id] : 1.0 - beliefs[id];
      next[id] = good ? models_[id].p11() : models_[id].p01();
    }
    if (prob > 0.0) future += prob * value(next, steps_left - 1);
  }
  return immediate + beta_ * future;
}

double BruteForceSolver::value(const BeliefVector& beliefs, int steps_left) {
  if (steps_left > kBruteForceMaxHorizon) throw TooLarge("exhaustive search supports horizons up to 12");
  if (steps_left <= 0) return 0.0;
  auto key = std::make_pair(steps_left, beliefs);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  double best = 0.0;
  for (const auto& a : actions_) best = std::max(best, action_value(beliefs, a, steps_left));
  memo_.emplace(std::move(key), best);
  return best;
}

Action BruteForceSolver::best_action(const BeliefVector& beliefs, int steps_left) {
  if (steps_left > kBruteForceMaxHorizon) throw TooLarge("exhaustive search supports horizons up to 12");
  if (beliefs.size() != models_.size()) throw std::invalid_argument("one belief per channel is required");
  const Action* best = &actions_.front();
  double best_value = -1.0;
  for (const auto& a : actions_) {
    const double v = action_value(beliefs, a, std::max(steps_left, 1));
    if (v > best_value + 1e-12) {
      best_value = v;
      best = &a;
    }
  }
  return *best;
}

double optimal_value_bruteforce(const std::vector<ChannelModel>& models, const BeliefVector& beliefs, int K,
                                double beta, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  if (horizon > kBruteForceMaxHorizon) throw TooLarge("exhaustive search supports horizons up to 12");
  if (beliefs.size() != models.size()) throw std::invalid_argument("one belief per channel is required");
  BruteForceSolver solver(models, K, beta);
  return solver.value(beliefs, horizon);
}

}  // namespace whittle
