#include "whittle/channel_model.hpp"

#include <cmath>
#include <string>

#include "whittle/errors.hpp"

namespace whittle {

namespace {

bool strictly_inside_unit(double p) { return p > 0.0 && p < 1.0; }

}  // namespace

ChannelModel::ChannelModel(double p01, double p11, double bandwidth) : p01_(p01), p11_(p11), bandwidth_(bandwidth) {
  if (!strictly_inside_unit(p01) || !strictly_inside_unit(p11)) {
    throw AbsorbingChain("transition probabilities must lie in (0, 1): p01=" + std::to_string(p01) +
                         " p11=" + std::to_string(p11));
  }
  if (!(bandwidth > 0.0 && bandwidth <= 1.0)) {
    throw BadBandwidth("bandwidth must lie in (0, 1]: " + std::to_string(bandwidth));
  }
}

ChannelModel validate_channel(double p01, double p11, double bandwidth) { return ChannelModel(p01, p11, bandwidth); }

BeliefState one_step_update(const ChannelModel& ch, BeliefState omega) noexcept {
  return omega * ch.p11() + (1.0 - omega) * ch.p01();
}

BeliefState k_step_update(const ChannelModel& ch, BeliefState omega, std::uint64_t k) noexcept {
  if (k == 0) return omega;
  // T^k(w) = (p01 - a^k (p01 - (1 - a) w)) / (1 - a),  a = p11 - p01.
  const double a = ch.p11() - ch.p01();
  const double ak = std::pow(a, static_cast<double>(k));
  return (ch.p01() - ak * (ch.p01() - (1.0 - a) * omega)) / (1.0 - a);
}

BeliefState stationary_belief(const ChannelModel& ch) noexcept { return ch.p01() / (ch.p01() + ch.p10()); }

CrossingTime crossing_time(const ChannelModel& ch, BeliefState omega, BeliefState level) {
  if (omega > level) return CrossingTime::finite(0);

  if (!ch.positively_correlated()) {
    if (one_step_update(ch, omega) > level) return CrossingTime::finite(1);
    return CrossingTime::infinite();
  }

  const double wo = stationary_belief(ch);
  if (level >= wo) return CrossingTime::infinite();

  const double a = ch.p11() - ch.p01();
  std::uint64_t steps = 1;
  if (a > 0.0) {
    const double ratio = (wo - level) / (wo - omega);
    const double raw = std::floor(std::log(ratio) / std::log(a)) + 1.0;
    steps = raw < 1.0 ? 1 : static_cast<std::uint64_t>(raw);
  }
  // floor-of-log can be off by one near the boundary; settle it on the closed form.
  while (!(k_step_update(ch, omega, steps) > level)) {
    // Level within rounding of the fixed point: the orbit stalls below it.
    if (k_step_update(ch, omega, steps + 1) == k_step_update(ch, omega, steps)) return CrossingTime::infinite();
    ++steps;
  }
  while (steps > 1 && k_step_update(ch, omega, steps - 1) > level) --steps;
  return CrossingTime::finite(steps);
}

}  // namespace whittle
