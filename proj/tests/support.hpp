#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "whittle/channel_model.hpp"
#include "whittle/rng.hpp"

namespace whittle::testing {

// Hand-rolled generator for property tests: channels with transition
// probabilities drawn away from the absorbing edges.
class ChannelGen {
 public:
  explicit ChannelGen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }

  ChannelModel channel(double margin = 0.05, bool random_bandwidth = false) {
    const double p01 = uniform(margin, 1.0 - margin);
    const double p11 = uniform(margin, 1.0 - margin);
    const double bw = random_bandwidth ? uniform(0.2, 1.0) : 1.0;
    return ChannelModel(p01, p11, bw);
  }

  ChannelModel positive(double margin = 0.05) {
    auto c = channel(margin);
    return c.positively_correlated() ? c : ChannelModel(c.p11(), c.p01());
  }

  ChannelModel negative(double margin = 0.05) {
    for (;;) {
      auto c = channel(margin);
      if (c.p01() == c.p11()) continue;
      return c.positively_correlated() ? ChannelModel(c.p11(), c.p01()) : c;
    }
  }

  std::vector<double> beliefs(std::size_t n) {
    std::vector<double> out(n);
    for (auto& w : out) w = rng_.uniform();
    return out;
  }

  SplitMix64& rng() { return rng_; }

 private:
  SplitMix64 rng_;
};

inline std::vector<double> unit_grid(int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = static_cast<double>(i) / (points - 1);
  return g;
}

// Naive T^k by iteration, the oracle for the closed form.
inline double iterate_update(const ChannelModel& ch, double w, int k) {
  for (int i = 0; i < k; ++i) w = w * ch.p11() + (1.0 - w) * ch.p01();
  return w;
}

// Naive crossing time; -1 when not crossed within `limit` steps.
inline long naive_crossing(const ChannelModel& ch, double w, double level, long limit = 10000) {
  for (long k = 0; k <= limit; ++k) {
    if (w > level) return k;
    w = w * ch.p11() + (1.0 - w) * ch.p01();
  }
  return -1;
}

}  // namespace whittle::testing
