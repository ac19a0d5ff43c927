#include "whittle/value_iteration_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace whittle {

namespace {

std::size_t chain_length(double beta, double tol) {
  if (beta <= 0.0) return 2;
  // beta^K / (1 - beta) < tol, plus a little slack for the tail closure.
  const double k = std::log(tol * (1.0 - beta)) / std::log(beta);
  return static_cast<std::size_t>(std::max(1.0, std::ceil(k))) + 2;
}

}  // namespace

ValueIterationOracle::ValueIterationOracle(const ChannelModel& ch, double beta, BeliefState omega, double tol)
    : ch_(ch), beta_(beta), tol_(tol) {
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("discount factor must lie in [0, 1)");
  if (!(tol > 0.0)) throw std::invalid_argument("oracle tolerance must be positive");

  const std::size_t len = chain_length(beta, tol);
  const BeliefState heads[3] = {omega, ch.p01(), ch.p11()};
  beliefs_.reserve(3 * len);
  passive_next_.reserve(3 * len);
  std::vector<std::size_t> tails;
  for (int c = 0; c < 3; ++c) {
    const std::size_t start = beliefs_.size();
    if (c == 1) p01_index_ = start;
    if (c == 2) p11_index_ = start;
    BeliefState b = heads[c];
    for (std::size_t k = 0; k < len; ++k) {
      beliefs_.push_back(b);
      passive_next_.push_back(beliefs_.size());
      b = one_step_update(ch, b);
    }
    tails.push_back(beliefs_.size() - 1);
  }
  // Close each chain: its last passive move lands on the reachable belief
  // nearest to the true successor.
  for (std::size_t tail : tails) passive_next_[tail] = nearest_state(one_step_update(ch, beliefs_[tail]));
  values_.assign(beliefs_.size(), 0.0);
}

double ValueIterationOracle::solve(double subsidy) {
  subsidy_ = subsidy;
  const double bw = ch_.bandwidth();
  const double stop = beta_ > 0.0 ? tol_ * (1.0 - beta_) / (2.0 * beta_) : 0.0;
  const std::size_t n = beliefs_.size();
  sweeps_ = 0;
  for (;;) {
    ++sweeps_;
    double change = 0.0;
    // Backward within each chain so the passive successor is already fresh.
    for (std::size_t i = n; i-- > 0;) {
      const double b = beliefs_[i];
      const double active = b * bw + beta_ * (b * values_[p11_index_] + (1.0 - b) * values_[p01_index_]);
      const double passive = subsidy + beta_ * values_[passive_next_[i]];
      const double v = std::max(active, passive);
      change = std::max(change, std::fabs(v - values_[i]));
      values_[i] = v;
    }
    if (change <= stop || sweeps_ > 10'000'000) break;
  }
  return values_[0];
}

double ValueIterationOracle::action_gap() const noexcept {
  const double b = beliefs_[0];
  const double active = b * ch_.bandwidth() + beta_ * (b * values_[p11_index_] + (1.0 - b) * values_[p01_index_]);
  const double passive = subsidy_ + beta_ * values_[passive_next_[0]];
  return active - passive;
}

std::pair<double, double> ValueIterationOracle::action_values(BeliefState omega) const {
  const std::size_t len = p01_index_;
  std::vector<BeliefState> chain(len);
  chain[0] = omega;
  for (std::size_t k = 1; k < len; ++k) chain[k] = one_step_update(ch_, chain[k - 1]);
  auto active_value = [&](BeliefState b) {
    return b * ch_.bandwidth() + beta_ * (b * values_[p11_index_] + (1.0 - b) * values_[p01_index_]);
  };
  double next = values_[nearest_state(one_step_update(ch_, chain[len - 1]))];
  for (std::size_t k = len; k-- > 1;) next = std::max(active_value(chain[k]), subsidy_ + beta_ * next);
  return {active_value(omega), subsidy_ + beta_ * next};
}

double ValueIterationOracle::action_gap_at(BeliefState omega) const {
  const auto [active, passive] = action_values(omega);
  return active - passive;
}

double ValueIterationOracle::value_at(BeliefState omega) const {
  const auto [active, passive] = action_values(omega);
  return std::max(active, passive);
}

std::size_t ValueIterationOracle::nearest_state(BeliefState b) const noexcept {
  std::size_t best = 0;
  double best_gap = std::fabs(beliefs_[0] - b);
  for (std::size_t i = 1; i < beliefs_.size(); ++i) {
    const double gap = std::fabs(beliefs_[i] - b);
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return best;
}

double oracle_value_iteration(const ChannelModel& ch, double beta, double subsidy, BeliefState omega, double tol) {
  ValueIterationOracle oracle(ch, beta, omega, tol);
  return oracle.solve(subsidy);
}

double oracle_index(const ChannelModel& ch, double beta, BeliefState omega, double tol, int iterations) {
  ValueIterationOracle oracle(ch, beta, omega, tol);
  double lo = 0.0;
  double hi = ch.bandwidth();
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    oracle.solve(mid);
    if (oracle.action_gap() > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace whittle
