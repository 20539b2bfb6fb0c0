#pragma once

// Batch execution of configured runs and spectral certification, with CSV/JSON output.

#include "mstefan/config.hpp"
#include "mstefan/simulation.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mstefan {

namespace exit_code {
inline constexpr int kClean = 0;
inline constexpr int kSolverAbort = 1;
inline constexpr int kAuditFailure = 2;
inline constexpr int kConfigError = 64;
}  // namespace exit_code

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

/// Header line of timeseries.csv for n_species species.
std::string timeseries_header(int n_species);
std::string timeseries_row(const DiagnosticsRecord& r);

/// Cosine initial data with equal diffusivities evolves as the heat equation;
/// returns the exact concentrations at time t, or nothing if not applicable.
std::optional<ConcentrationField> heat_analytic_solution(const RunConfig& cfg, double t);

struct ScenarioResult {
  int exit_code = exit_code::kClean;
  Trajectory trajectory;
  nlohmann::json summary;
  std::vector<std::string> files;
};

/// Runs the configured simulation and writes timeseries.csv, snapshots,
/// audit.json and run_summary.json into cfg.output_dir.
ScenarioResult run_scenario(const RunConfig& cfg);

struct CertifyResult {
  int exit_code = exit_code::kClean;
  nlohmann::json report;
  std::vector<std::string> files;
};

/// Certifies spectra of -A and A0 and definiteness of B at cfg.samples random
/// strictly admissible states of cfg's mixture, seeded by cfg.seed.
CertifyResult certify(const RunConfig& cfg);

}  // namespace mstefan
