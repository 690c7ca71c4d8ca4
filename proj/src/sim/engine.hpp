// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sim/scenario.hpp"
#include "sim/trace.hpp"

namespace dcp::sim {

struct RunOutput {
  Trace trace;
  Metrics metrics;
};

/// Deterministic single-threaded execution of a validated scenario.
/// Identical (scenario, seed) pairs produce byte-identical traces.
RunOutput run(const Scenario& scenario);

}  // namespace dcp::sim
