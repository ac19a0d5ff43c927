#pragma once

#include <cstdint>

namespace whittle {

/**
 * SplitMix64: a counter-based generator. Output n of stream s is a pure
 * function of (s, n), so every replication gets its own substream and
 * results do not depend on scheduling.
 */
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept { return mix(state_ += kGolden); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Seed for substream `stream` of replication `replication`.
  static std::uint64_t substream(std::uint64_t seed, std::uint64_t replication, std::uint64_t stream) noexcept {
    return mix(mix(seed ^ mix(replication + kGolden)) + stream * kGolden);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

}  // namespace whittle
