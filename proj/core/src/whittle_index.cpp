#include "whittle/whittle_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "whittle/value_iteration_oracle.hpp"

namespace whittle {

namespace {

// Index of a unit-bandwidth channel under discount beta.
double unit_index_discounted(const ChannelModel& ch, double b, BeliefState w) {
  const double p01 = ch.p01();
  const double p11 = ch.p11();
  const double wo = stationary_belief(ch);

  if (ch.positively_correlated()) {
    if (w <= p01 || w >= p11) return w;
    if (w >= wo) return w / (1.0 - b * p11 + b * w);
    const CrossingTime lt = crossing_time(ch, p01, w);
    // p01 < w < omega_o always crosses; an infinite answer means w is within
    // rounding of omega_o, where the next branch agrees.
    if (lt.is_infinite()) return w / (1.0 - b * p11 + b * w);
    const auto L = lt.steps();
    const double x = k_step_update(ch, p01, L);
    const double bL = std::pow(b, static_cast<double>(L));
    const double den = (1.0 - b * p11) * (1.0 - bL * b) + (1.0 - b) * bL * b * x;
    const double c1 = (1.0 - b * p11) * (1.0 - bL) / den;
    const double c2 = bL * x / den;
    const double tw = one_step_update(ch, w);
    const double q = b * (1.0 - b * p11) - b * (w - b * tw);
    return (w - b * tw + c2 * (1.0 - b) * q) / (1.0 - b * p11 - c1 * q);
  }

  if (w <= p11 || w >= p01) return w;
  const double tp = one_step_update(ch, p11);
  if (w >= tp) return (b * p01 + w * (1.0 - b)) / (1.0 + b * (p01 - w));
  const double den = 1.0 + (1.0 + b) * b * p01 - b * b * tp;
  const double c3 = (1.0 - b * (1.0 - p01)) / den;
  const double c4 = (b * tp * (1.0 - b) + b * b * p01) / den;
  if (w >= wo) {
    return (1.0 - b + b * c4) * (b * p01 + w * (1.0 - b)) / (1.0 - b * (1.0 - p01) - c3 * (b * b * p01 + b * w - b * b * w));
  }
  const double tw = one_step_update(ch, w);
  const double r = b * tw - b * p01 - w;
  return ((1.0 - b) * (b * p01 + w - b * tw) - c4 * b * r) / (1.0 - b * (1.0 - p01) + c3 * b * r);
}

double unit_index_average(const ChannelModel& ch, BeliefState w) {
  const double p01 = ch.p01();
  const double p11 = ch.p11();
  const double wo = stationary_belief(ch);

  if (ch.positively_correlated()) {
    if (w <= p01 || w >= p11) return w;
    if (w >= wo) return w / (1.0 - p11 + w);
    const CrossingTime lt = crossing_time(ch, p01, w);
    if (lt.is_infinite()) return w / (1.0 - p11 + w);
    const double L = static_cast<double>(lt.steps());
    const double x = k_step_update(ch, p01, lt.steps());
    const double d = w - one_step_update(ch, w);
    return (d * (L + 1.0) + x) / (1.0 - p11 + d * L + x);
  }

  if (w <= p11 || w >= p01) return w;
  const double tp = one_step_update(ch, p11);
  if (w >= tp) return p01 / (1.0 + p01 - w);
  if (w >= wo) return p01 / (1.0 + p01 - tp);
  const double tw = one_step_update(ch, w);
  return (w + p01 - tw) / (1.0 + p01 - tp + tw - w);
}

void require_discount(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("discount factor must lie in [0, 1)");
}

template <class Index>
BreakpointSet collect_breakpoints(const ChannelModel& ch, Index index, const BeliefState* initial, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("breakpoint delta must be positive");
  BreakpointSet out;
  const double wo = stationary_belief(ch);
  const double p01 = ch.p01();
  const double p11 = ch.p11();
  auto& pts = out.points;

  if (!ch.positively_correlated()) {
    const double tp = one_step_update(ch, p11);
    pts = {index(p11), index(tp)};
    if (initial) {
      pts.push_back(index(p01));
      pts.push_back(index(*initial));
      if (*initial < wo) pts.push_back(index(one_step_update(ch, *initial)));
    }
  } else {
    const double w_top = index(wo);
    // Smallest belief below omega_o whose index is within delta of W(omega_o).
    double lo = std::max(0.0, wo - delta);
    double hi = wo;
    if (w_top - index(lo) > delta) {
      for (int i = 0; i < 64; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (w_top - index(mid) <= delta) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      lo = hi;
    }
    const double omega_bar = lo;

    pts = {index(p01), w_top};
    if (initial) pts.push_back(index(p11));
    double gray_low = w_top;
    auto walk = [&](BeliefState start) {
      BeliefState b = start;
      for (std::uint64_t k = 0;; ++k) {
        b = k_step_update(ch, start, k);
        pts.push_back(index(b));
        if (b > omega_bar || k > 1'000'000) break;
      }
      gray_low = std::min(gray_low, index(b));
    };
    walk(p01);
    if (initial) {
      if (*initial < wo) {
        walk(*initial);
      } else {
        pts.push_back(index(*initial));
      }
    }
    if (gray_low < w_top) out.gray_area = GrayArea{gray_low, w_top};
  }

  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return out;
}

}  // namespace

double index_discounted(const ChannelModel& ch, double beta, BeliefState omega) {
  require_discount(beta);
  return unit_index_discounted(ch, beta, omega) * ch.bandwidth();
}

double index_discounted(const IndexQuery& q) {
  const auto* d = std::get_if<Discounted>(&q.criterion);
  if (!d) throw std::invalid_argument("index_discounted needs a discounted criterion");
  return index_discounted(q.channel, d->beta, q.omega);
}

double index_average(const ChannelModel& ch, BeliefState omega) { return unit_index_average(ch, omega) * ch.bandwidth(); }

double index_average(const IndexQuery& q) {
  if (!is_average(q.criterion)) throw std::invalid_argument("index_average needs the average criterion");
  return index_average(q.channel, q.omega);
}

double whittle_index(const ChannelModel& ch, const Criterion& c, BeliefState omega) {
  if (const auto* d = std::get_if<Discounted>(&c)) return index_discounted(ch, d->beta, omega);
  return index_average(ch, omega);
}

BreakpointSet index_breakpoints(const ChannelModel& ch, double beta, BeliefState initial_omega, double delta) {
  require_discount(beta);
  auto index = [&](BeliefState w) { return index_discounted(ch, beta, w); };
  return collect_breakpoints(ch, index, &initial_omega, delta);
}

BreakpointSet index_breakpoints_average(const ChannelModel& ch, double delta) {
  auto index = [&](BeliefState w) { return index_average(ch, w); };
  return collect_breakpoints(ch, index, nullptr, delta);
}

IndexabilityReport verify_indexability(const ChannelModel& ch, double beta, double m_grid_step) {
  require_discount(beta);
  if (!(m_grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");

  constexpr double kOracleTol = 1e-10;
  ValueIterationOracle oracle(ch, beta, stationary_belief(ch), kOracleTol);
  IndexabilityReport report;
  const double m_lo = -0.1;
  const double m_hi = ch.bandwidth() + 0.1;
  const auto steps = static_cast<std::size_t>(std::floor((m_hi - m_lo) / m_grid_step + 1e-9));

  double previous = -1.0;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double m = m_lo + static_cast<double>(i) * m_grid_step;
    oracle.solve(m);
    double threshold;
    if (oracle.action_gap_at(1.0) <= 0.0) {
      threshold = 2.0;
    } else if (oracle.action_gap_at(0.0) > 0.0) {
      threshold = -1.0;
    } else {
      double lo = 0.0;
      double hi = 1.0;
      for (int k = 0; k < 40; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (oracle.action_gap_at(mid) > 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      threshold = lo;
    }
    if (i > 0 && previous - threshold > report.max_violation) {
      report.max_violation = previous - threshold;
      report.worst_subsidy = m;
    }
    previous = threshold;
    ++report.grid_points;
  }
  report.passed = report.max_violation <= 1e-9;
  return report;
}

}  // namespace whittle
