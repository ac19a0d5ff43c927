#pragma once

#include "whittle/channel_model.hpp"
#include "whittle/criterion.hpp"
#include "whittle/errors.hpp"
#include "whittle/policy_engine.hpp"
#include "whittle/presets.hpp"
#include "whittle/relaxation_bound.hpp"
#include "whittle/rng.hpp"
#include "whittle/sim_harness.hpp"
#include "whittle/subsidy_bandit.hpp"
#include "whittle/value_iteration_oracle.hpp"
#include "whittle/whittle_index.hpp"
