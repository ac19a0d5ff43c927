#include "whittle/relaxation_bound.hpp"

#include <algorithm>
#include <stdexcept>

#include "whittle/subsidy_bandit.hpp"
#include "whittle/whittle_index.hpp"

namespace whittle {

namespace {

double beta_of(const BoundRequest& req) {
  const auto* d = std::get_if<Discounted>(&req.criterion);
  if (!d) throw std::invalid_argument("expected a discounted criterion");
  return d->beta;
}

std::vector<BeliefState> start_beliefs(const BoundRequest& req) {
  if (!req.initial_beliefs.empty()) return req.initial_beliefs;
  std::vector<BeliefState> out;
  out.reserve(req.channels.size());
  for (const auto& ch : req.channels) out.push_back(stationary_belief(ch));
  return out;
}

double max_bandwidth(const std::vector<ChannelModel>& channels) {
  double b = 0.0;
  for (const auto& ch : channels) b = std::max(b, ch.bandwidth());
  return b;
}

void check_k(std::size_t n, int K) {
  if (n == 0) throw std::invalid_argument("at least one channel is required");
  if (K < 1 || static_cast<std::size_t>(K) > n) throw std::invalid_argument("K must lie in [1, N]");
}

struct Interval {
  double lo;
  double hi;
  bool gray;
};

// Partition [0, top] at every breakpoint; flag intervals touching a gray area.
std::vector<Interval> partition(const std::vector<BreakpointSet>& sets, double top) {
  std::vector<double> cuts{0.0, top};
  std::vector<GrayArea> grays;
  for (const auto& s : sets) {
    for (double p : s.points) {
      if (p > 0.0 && p < top) cuts.push_back(p);
    }
    if (s.gray_area) grays.push_back(*s.gray_area);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Interval> out;
  out.reserve(cuts.size());
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    Interval iv{cuts[j], cuts[j + 1], false};
    for (const auto& g : grays) {
      if (iv.lo < g.high && g.low < iv.hi) {
        iv.gray = true;
        break;
      }
    }
    out.push_back(iv);
  }
  return out;
}

// First non-gray interval whose (constant) subgradient is nonnegative.
template <class Subgradient, class Objective>
BoundResult scan(const std::vector<Interval>& intervals, double top, Subgradient g, Objective objective) {
  std::vector<std::size_t> clear;
  for (std::size_t j = 0; j < intervals.size(); ++j) {
    if (!intervals[j].gray) clear.push_back(j);
  }
  // g is monotone in m, so the predicate is monotone along `clear`.
  const auto it = std::partition_point(clear.begin(), clear.end(), [&](std::size_t j) {
    return g(0.5 * (intervals[j].lo + intervals[j].hi)) < 0.0;
  });
  BoundResult r;
  if (it == clear.end()) {
    r.m_star = top;
    r.exact = intervals.empty() || !intervals.back().gray;
  } else {
    const std::size_t j = *it;
    r.m_star = intervals[j].lo;
    r.exact = j == 0 || !intervals[j - 1].gray;
  }
  r.value = objective(r.m_star);
  return r;
}

}  // namespace

void validate_request(const BoundRequest& req) {
  check_k(req.channels.size(), req.K);
  validate_criterion(req.criterion);
  if (!(req.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!req.initial_beliefs.empty() && req.initial_beliefs.size() != req.channels.size()) {
    throw std::invalid_argument("one initial belief per channel is required");
  }
  for (double w : req.initial_beliefs) {
    if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("initial beliefs must lie in [0, 1]");
  }
}

double relaxed_objective(const BoundRequest& req, double m) {
  const double beta = beta_of(req);
  const auto omegas = start_beliefs(req);
  double total = 0.0;
  for (std::size_t i = 0; i < req.channels.size(); ++i) {
    total += evaluate_arm({req.channels[i], m, req.criterion}, omegas[i]).value;
  }
  const double passive_budget = static_cast<double>(req.channels.size()) - req.K;
  return total - m * passive_budget / (1.0 - beta);
}

double bound_subgradient(const BoundRequest& req, double m) {
  const double beta = beta_of(req);
  const auto omegas = start_beliefs(req);
  double total = 0.0;
  for (std::size_t i = 0; i < req.channels.size(); ++i) {
    total += evaluate_arm({req.channels[i], m, req.criterion}, omegas[i]).passive_time;
  }
  const double passive_budget = static_cast<double>(req.channels.size()) - req.K;
  return total - passive_budget / (1.0 - beta);
}

double relaxed_objective_average(const std::vector<ChannelModel>& channels, int K, double m) {
  double total = 0.0;
  for (const auto& ch : channels) {
    const SubsidyProblem p{ch, m, Average{}};
    total += average_value_passive(p, threshold_average(p)).reward_rate;
  }
  return total - m * (static_cast<double>(channels.size()) - K);
}

double bound_subgradient_average(const std::vector<ChannelModel>& channels, int K, double m) {
  double total = 0.0;
  for (const auto& ch : channels) {
    const SubsidyProblem p{ch, m, Average{}};
    total += average_value_passive(p, threshold_average(p)).passive_share;
  }
  return total - (static_cast<double>(channels.size()) - K);
}

BoundResult upper_bound_discounted(const BoundRequest& req) {
  validate_request(req);
  const double beta = beta_of(req);
  const auto omegas = start_beliefs(req);
  const double n = static_cast<double>(req.channels.size());
  const double delta = req.epsilon * (1.0 - beta) / req.K;

  std::vector<BreakpointSet> sets;
  sets.reserve(req.channels.size());
  for (std::size_t i = 0; i < req.channels.size(); ++i) {
    sets.push_back(index_breakpoints(req.channels[i], beta, omegas[i], delta / n));
  }
  const double top = max_bandwidth(req.channels);
  BoundResult r = scan(
      partition(sets, top), top, [&](double m) { return bound_subgradient(req, m); },
      [&](double m) { return relaxed_objective(req, m); });
  r.criterion = req.criterion;
  return r;
}

BoundResult upper_bound_bisection(const BoundRequest& req, int iters, std::vector<std::pair<double, double>>* trace) {
  validate_request(req);
  if (iters < 1) throw std::invalid_argument("bisection needs at least one iteration");
  BoundResult r;
  r.criterion = req.criterion;
  r.exact = false;
  double lo = 0.0;
  double hi = max_bandwidth(req.channels);
  if (bound_subgradient(req, lo) >= 0.0) {
    r.m_star = lo;
    r.value = relaxed_objective(req, lo);
    return r;
  }
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (bound_subgradient(req, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (trace) trace->emplace_back(lo, hi);
  }
  r.m_star = hi;
  r.value = relaxed_objective(req, hi);
  return r;
}

BoundResult upper_bound_average(const std::vector<ChannelModel>& channels, int K, double epsilon) {
  check_k(channels.size(), K);
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double n = static_cast<double>(channels.size());
  const double delta = epsilon / K;

  std::vector<BreakpointSet> sets;
  sets.reserve(channels.size());
  for (const auto& ch : channels) sets.push_back(index_breakpoints_average(ch, delta / n));
  const double top = max_bandwidth(channels);
  BoundResult r = scan(
      partition(sets, top), top, [&](double m) { return bound_subgradient_average(channels, K, m); },
      [&](double m) { return relaxed_objective_average(channels, K, m); });
  r.criterion = Average{};
  return r;
}

BoundResult upper_bound(const BoundRequest& req) {
  if (is_average(req.criterion)) return upper_bound_average(req.channels, req.K, req.epsilon);
  return upper_bound_discounted(req);
}

}  // namespace whittle
