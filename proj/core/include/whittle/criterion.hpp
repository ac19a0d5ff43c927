#pragma once

#include <string>
#include <variant>

namespace whittle {

/// Expected total discounted reward with factor beta in [0, 1).
struct Discounted {
  double beta;
  friend bool operator==(const Discounted&, const Discounted&) = default;
};

/// Expected average reward over the infinite horizon.
struct Average {
  friend bool operator==(const Average&, const Average&) = default;
};

using Criterion = std::variant<Discounted, Average>;

inline bool is_average(const Criterion& c) noexcept { return std::holds_alternative<Average>(c); }

/// Throws std::invalid_argument unless beta is in [0, 1).
void validate_criterion(const Criterion& c);

std::string describe(const Criterion& c);

}  // namespace whittle
