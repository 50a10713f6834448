#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wlg/config.hpp"
#include "wlg/level_set.hpp"

namespace wlg {

struct CheckResult {
  std::string name;       // e.g. "separation"
  std::string op;         // module.operation exercised
  std::string property;   // property identifier the check verifies
  std::string status;     // pass | fail | skipped
  double value = 0.0;
  double tolerance = 0.0;
  std::string witness;    // violating cell/level indices, empty when passing
};

struct RunReport {
  std::vector<CheckResult> checks;
  std::string config_hash;
  std::string version;
  std::string timestamp;   // the only nondeterministic field
  double elapsed_seconds = 0.0;

  bool all_passed() const {
    for (auto& c : checks)
      if (c.status == "fail") return false;
    return true;
  }
};

// Executes the configured pipeline (build domain -> extend -> build family ->
// assemble -> checks -> optional TV cross-check), writes artifacts to the
// output directory, and returns the report. Solver errors become failed
// checks rather than exceptions.
RunReport run_experiment(const ExperimentConfig& cfg);

// Runs the family/field checkers against a previously emitted field.
RunReport verify_field(const ExperimentConfig& cfg, const std::string& field_csv);

// Serialization with stable key ordering; deterministic bytes apart from the
// timestamp entry.
std::string report_to_json(const RunReport& report);
void emit_report(const RunReport& report, const std::string& path);

}  // namespace wlg
