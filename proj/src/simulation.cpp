#include "mstefan/simulation.hpp"

#include "mstefan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mstefan {

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Completed: return "completed";
    case RunStatus::AuditFailed: return "audit_failed";
    case RunStatus::SolverAborted: return "solver_aborted";
  }
  return "unknown";
}

namespace {

int count_bound_violations(const ConcentrationField& c) {
  const int N = static_cast<int>(c.cols()) - 1;
  int bad = 0;
  for (int m = 0; m < c.rows(); ++m) {
    if (!(c.row(m).minCoeff() > 0.0) || !(c.row(m).head(N).sum() < 1.0)) ++bad;
  }
  return bad;
}

}  // namespace

Trajectory run_simulation(const MixtureSpec& spec, const Grid1D& grid, const SchemeParams& params,
                          const ConcentrationField& c0, const SimulationHooks& hooks) {
  params.validate(spec.species());
  if (c0.rows() != grid.cells() || c0.cols() != spec.species()) {
    throw Error(ErrorCode::DimensionMismatch, "initial data does not match grid and mixture");
  }
  constexpr int kMaxHalvings = 5;

  Trajectory traj;
  const ConcentrationField c_reg = regularize_initial(c0, params.eta_floor);
  EntropyField w = entropy_variables_from(c_reg);
  ConcentrationField c = concentrations_from(w);
  traj.reference = integrate(grid, c) / grid.length();
  traj.reference /= traj.reference.sum();

  StepState state{c, w, make_record(spec, grid, c, w, traj.reference, 0.0)};
  traj.initial = state;
  traj.records.push_back(state.record);
  traj.predicted_masses = state.record.masses;
  if (hooks.on_step) hooks.on_step(state, nullptr);

  double t = 0.0;
  const double t_end = params.t_end;
  const double t_tiny = 1e-12 * std::max(1.0, t_end);

  while (t < t_end - t_tiny) {
    const double macro_end = std::min(t + params.tau, t_end);
    double dt = params.tau;
    int halvings = 0;
    while (t < macro_end - t_tiny) {
      SchemeParams step_params = params;
      step_params.tau = std::min(dt, macro_end - t);
      StepResult res;
      try {
        res = advance_step(spec, grid, step_params, state.w);
      } catch (const NonlinearDivergence& e) {
        if (halvings == kMaxHalvings) {
          traj.status = RunStatus::SolverAborted;
          traj.message = std::string(e.what()) + " (after " + std::to_string(kMaxHalvings) + " tau halvings)";
          traj.final_state = state;
          return traj;
        }
        ++halvings;
        ++traj.tau_halvings;
        dt *= 0.5;
        continue;
      } catch (const Error& e) {
        traj.status = RunStatus::SolverAborted;
        traj.message = e.what();
        traj.final_state = state;
        return traj;
      }

      const double new_t = t + step_params.tau;
      StepState next;
      next.w = std::move(res.w_new);
      next.c = concentrations_from(next.w);
      traj.bound_violations += count_bound_violations(next.c);
      traj.damping_restarts += res.damping_restarts;
      next.record = make_record(spec, grid, next.c, next.w, traj.reference, new_t);
      next.record.tau = step_params.tau;
      next.record.picard_iterations = res.iterations;

      AuditVerdict verdict = audit_step(spec, grid, params, state, next);

      // Mass identity: int c^k = int c^{k-1} - eps tau int w^k + tau int r(c^k).
      const int N = spec.reduced();
      for (int i = 0; i < N; ++i) {
        traj.predicted_masses(i) += -params.eps * step_params.tau * next.record.w_integrals(i) +
                                    step_params.tau * next.record.production_integrals(i);
      }
      traj.predicted_masses(N) = grid.length() - traj.predicted_masses.head(N).sum();
      traj.max_mass_identity_error =
          std::max(traj.max_mass_identity_error, (next.record.masses - traj.predicted_masses).cwiseAbs().maxCoeff());

      const FluxReconstruction flux = reconstruct_fluxes(spec, grid, next.c);
      traj.max_flux_residual = std::max(traj.max_flux_residual, flux.relative_residual());
      const UphillEvent up = strongest_uphill(flux);
      if (up.face >= 0 && up.strength > traj.uphill.event.strength) {
        traj.uphill = {new_t, up};
      }

      traj.records.push_back(next.record);
      traj.audits.push_back(verdict);
      t = new_t;
      state = std::move(next);
      if (hooks.on_step) hooks.on_step(state, &traj.audits.back());

      if (!verdict.passed() && params.audit_mode == AuditMode::Enforce) {
        std::ostringstream os;
        os << "audit failed at t = " << t << ":";
        for (const auto& chk : verdict.checks) {
          if (!chk.passed) os << " " << chk.name << " (margin " << chk.margin << ")";
        }
        traj.status = RunStatus::AuditFailed;
        traj.message = os.str();
        traj.final_state = state;
        return traj;
      }
    }
  }
  traj.final_state = state;
  return traj;
}

}  // namespace mstefan
