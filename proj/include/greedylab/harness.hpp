#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "greedylab/report.hpp"

namespace greedylab {

/// One declared check; `invariant` names the module property it instantiates.
struct Assertion {
  std::string invariant;
  bool passed = true;
  std::string detail;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json config;   // effective configuration, defaults filled in
  nlohmann::json results;
  CsvTable detail;
  std::vector<PlotPoint> plot;
  std::vector<Assertion> assertions;

  bool all_passed() const;
  /// First failing assertion, or nullptr.
  const Assertion* first_failure() const;
  nlohmann::json summary() const;
};

/// Runs "pursuit", "tga", "constants", "recursion" or "replay" with the
/// given configuration. Unknown experiments, unknown keys and ill-typed
/// values raise InvalidInput; oracle budgets raise CapacityError.
ExperimentReport run_experiment(const std::string& experiment, const nlohmann::json& config);

/// Writes summary.json and detail.csv (plus plot.csv with `plot_data`)
/// under `out_dir`, creating it if needed.
void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir, bool plot_data = false);

/// Exit status contract of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitUsage = 2;

}  // namespace greedylab
