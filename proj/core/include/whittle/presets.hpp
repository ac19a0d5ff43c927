#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "whittle/channel_model.hpp"
#include "whittle/criterion.hpp"
#include "whittle/sim_harness.hpp"

namespace whittle {

/// Named parameter set for the bundled experiments.
struct Preset {
  std::string name;
  std::string description;
  std::vector<ChannelModel> channels;
  int K = 1;
  Criterion criterion = Average{};
  std::vector<BeliefState> initial_beliefs;  ///< empty: stationary
  int horizon = 1000;
  int replications = 1000;
  std::uint64_t seed = 1;
  double epsilon = 1e-3;
  std::vector<PolicyKind> policies;
  std::optional<RegimeSwitch> regime_switch;
};

/// fig2, fig8, fig9, fig11, fig12.
const std::vector<Preset>& builtin_presets();

/// Throws std::invalid_argument for an unknown name.
const Preset& find_preset(std::string_view name);

}  // namespace whittle
