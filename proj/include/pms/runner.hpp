#pragma once

#include "pms/config.hpp"

namespace pms {

/// Exit codes shared by the scenario entry points and the CLI:
/// 0 success, 2 config error, 3 numeric failure, 4 partial sweep.
enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericError = 3, kPartialSweep = 4 };

int run_simulate(const ScenarioConfig& cfg);
int run_sweep(const ScenarioConfig& cfg);
int run_optimize(const ScenarioConfig& cfg);
int run_tcmin(const ScenarioConfig& cfg);
int run_retrieve_chain(const ScenarioConfig& cfg);

int run_scenario(Scenario s, const ScenarioConfig& cfg);

}  // namespace pms
