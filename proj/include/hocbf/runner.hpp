#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hocbf/scenario.hpp"
#include "hocbf/simulator.hpp"
#include "hocbf/verifier.hpp"

namespace hocbf {

/// Process exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitDiverged = 2, kExitIo = 3, kExitChecks = 4 };

struct RunManifest {
  ScenarioConfig config;
  std::string out_dir;
  std::vector<std::string> artifacts;
  Termination termination;
  ScenarioChecks checks;
  double wall_seconds = 0.0;

  int exit_code() const { return termination.completed() ? kExitOk : kExitDiverged; }
};

/// Output directory: the explicit one, else the config's out_dir, else
/// $HOCBF_OUT_ROOT/<name>, else ./out/<name>.
std::string resolve_out_dir(const ScenarioConfig& config, const std::string& explicit_dir);

/// Loads and validates the config (nothing is written if that fails), runs
/// it, and writes trajectory.csv, psi.csv, events.csv and manifest.json.
/// A run that diverges or becomes infeasible still writes what was logged.
RunManifest run_scenario(const std::string& config_path, const std::string& out_dir);
RunManifest run_scenario(const ScenarioConfig& config, const std::string& out_dir);

std::string manifest_json(const RunManifest& manifest);

struct VerifyReport {
  CertificateReport hocbf_condition;
  CertificateReport relative_degree;
  CertificateReport singular_containment;

  bool passed() const {
    return hocbf_condition.passed() && relative_degree.passed() && singular_containment.passed();
  }
};

VerifyReport verify_scenario(const ScenarioConfig& config, long samples, std::uint64_t seed);
std::string verify_json(const VerifyReport& report);

struct CompareReport {
  RunResult filtered;
  RunResult unfiltered;
  ScenarioChecks filtered_checks;
  ScenarioChecks unfiltered_checks;
};

CompareReport compare_scenario(const ScenarioConfig& config);
std::string compare_json(const CompareReport& report);

}  // namespace hocbf
