#pragma once

#include <ostream>

#include "orbsim/config.hpp"
#include "orbsim/metrics.hpp"

namespace orbsim {

// Optional per-step streams. Rows are written in the serial merge phase, so
// their content does not depend on the thread count.
struct RunStreams {
  std::ostream* timeseries = nullptr;
  std::ostream* trace = nullptr;
};

// Runs one scenario to completion. Throws ConfigError for invalid input.
MetricsReport run_scenario(const ScenarioConfig& cfg, RunStreams streams = {});

}  // namespace orbsim
