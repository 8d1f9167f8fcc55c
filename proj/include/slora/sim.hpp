#pragma once

#include <cstdint>
#include <vector>

#include "slora/metrics.hpp"
#include "slora/scenario.hpp"

namespace slora {

// Execute one run. seed overrides the scenario seed when nonzero_seed is set.
// trace, when non-null, receives every FSM transition.
RunMetrics run_scenario(const Scenario& sc, std::vector<TraceRow>* trace = nullptr);
RunMetrics run_scenario_with_seed(const Scenario& sc, std::uint64_t seed,
                                  std::vector<TraceRow>* trace = nullptr);

} // namespace slora
