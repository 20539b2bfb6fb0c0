#pragma once

#include "mstefan/diagnostics.hpp"
#include "mstefan/stepper.hpp"

#include <functional>
#include <string>
#include <vector>

namespace mstefan {

enum class RunStatus { Completed, AuditFailed, SolverAborted };

const char* to_string(RunStatus status);

struct SimulationHooks {
  /// Called for the initial state (verdict == nullptr) and after every accepted step.
  std::function<void(const StepState&, const AuditVerdict*)> on_step;
};

struct UphillRecord {
  double time = 0.0;
  UphillEvent event;
};

/// Everything a run produced, including partial results when it stopped early.
struct Trajectory {
  RunStatus status = RunStatus::Completed;
  std::string message;

  std::vector<DiagnosticsRecord> records;
  /// One verdict per accepted step (records[k + 1]).
  std::vector<AuditVerdict> audits;
  StepState initial;
  StepState final_state;
  /// Mean initial composition, the equilibrium of the zero-production problem.
  Vector reference;

  /// Cells found outside the open simplex; the scheme never clamps, so this must stay 0.
  int bound_violations = 0;
  int tau_halvings = 0;
  int damping_restarts = 0;
  /// masses(0) - eps sum tau int w + sum tau int r, accumulated per step.
  Vector predicted_masses;
  double max_mass_identity_error = 0.0;
  double max_flux_residual = 0.0;
  /// Strongest J_i grad c_i > 0 seen over the run.
  UphillRecord uphill;
  bool uphill_seen() const { return uphill.event.face >= 0; }
};

/// Regularizes c0, converts to entropy variables and marches to params.t_end.
/// A step that fails to converge is retried with tau halved, up to 5 times.
/// Throws InadmissibleInitialData / InvalidParameter before the first step;
/// failures during marching are reported through Trajectory::status.
Trajectory run_simulation(const MixtureSpec& spec, const Grid1D& grid, const SchemeParams& params,
                          const ConcentrationField& c0, const SimulationHooks& hooks = {});

}  // namespace mstefan
