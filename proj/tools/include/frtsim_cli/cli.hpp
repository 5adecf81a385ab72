#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "frtsim/config.hpp"
#include "frtsim/grid_code.hpp"
#include "frtsim/metrics.hpp"
#include "frtsim/scenario.hpp"

namespace frtsim::cli {

enum ExitCode : int {
  kOk = 0,
  kFailed = 1,  // grid-code violation or unexpected divergence
  kUsage = 2,   // bad arguments or invalid configuration
};

struct ScenarioOutcome {
  ScenarioResult result;
  Metrics metrics;
  GridCodeVerdict verdict;

  /// Divergence only counts as failure when the scenario was not expected to be unstable.
  bool unexpected_divergence() const { return result.diverged && !result.expect_unstable; }
};

/// Runs one scenario and derives its metrics and grid-code verdict.
ScenarioOutcome evaluate_scenario(const Scenario& sc);

/// Self-contained JSON report: metrics, verdict, events, energy audit, config echo, tool version.
std::string report_json(const ScenarioConfig& cfg, const ScenarioOutcome& o, unsigned seed);

/// The with/without-STATCOM pair derived from one configuration.
std::pair<ScenarioConfig, ScenarioConfig> compare_pair(const ScenarioConfig& cfg);

/// Entry point behind main(); args exclude the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace frtsim::cli
