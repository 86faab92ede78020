#pragma once
#include <string>
#include <vector>

#include "json.hpp"
#include "vfw/errors.hpp"

namespace vfw {

// One experiment description, loaded from a JSON file and schema-validated
// before anything runs.  Unknown keys anywhere in the document are rejected.
struct Scenario {
  std::string name;
  std::string kind;  // particle | fields | radiation | brackets | fock | quantum
  std::uint64_t seed = 0;
  std::string output;  // subdirectory under the output root; defaults to name
  nlohmann::json params;
  nlohmann::json raw;  // full validated document, echoed into the report
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const nlohmann::json& doc, const std::string& origin);

struct InvariantResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct RunReport {
  Scenario scenario;
  std::vector<InvariantResult> invariants;
  std::vector<std::string> artifacts;
  double wall_time_s = 0.0;
  bool all_pass() const;
};

// Runs the scenario, writing CSV artifacts and report.json into
// <output root>/<scenario.output>.  The output root comes from the
// VFW_OUTPUT_ROOT environment variable (default "vfw-out").
RunReport run_scenario(const Scenario& sc);

std::string output_root();
std::string scenario_dir();  // bundled scenarios (VFW_SCENARIO_DIR overrides)
std::vector<std::string> bundled_scenarios();

// Column-wise comparison of two CSV artifacts.
struct CompareResult {
  std::vector<std::string> columns;
  std::vector<double> max_abs;
  std::vector<double> l2;
};
CompareResult compare_csv(const std::string& fileA, const std::string& fileB,
                          const std::vector<std::string>& columns);

// Entrypoint used by the vfw binary; returns the process exit code
// (0 pass, 1 invariant failure, 2 schema error, 3 runtime error).
int cli_main(int argc, char** argv);

}  // namespace vfw
