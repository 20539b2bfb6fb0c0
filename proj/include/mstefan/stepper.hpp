#pragma once

// Implicit Euler in time for the entropy-variable system with the
// eps (Lap^2 w + w) regularization. Each step is solved by a damped
// frozen-mobility fixed-point iteration.
//
// Per iteration, with w_bar the current iterate, the linear problem is
//
//   (h/tau) [c'(w_bar) + H^{-1}(w_bar)(w - w_bar) - c'_prev]
//     + K(w_bar) w + eps h (L^T L + I) w = h r'(c(w_bar)),
//
// where K is the face stiffness of the mobility B(w_bar) and L the Neumann
// Laplacian. The time term is linearized about w_bar; a fixed point w = w_bar
// is exactly a solution of the implicit Euler step.

#include "mstefan/fields.hpp"
#include "mstefan/grid.hpp"
#include "mstefan/mixture.hpp"

#include <vector>

namespace mstefan {

enum class AuditMode { Enforce, Warn };

struct SchemeParams {
  double tau = 1e-3;
  double eps = 1e-8;
  /// Max-norm Picard increment at which a step is accepted.
  double picard_tol = 1e-10;
  int picard_max = 200;
  /// Initial damping; halved on divergence.
  double damping_theta = 1.0;
  /// Floor applied to the initial data.
  double eta_floor = 1e-8;
  double t_end = 1.0;
  AuditMode audit_mode = AuditMode::Enforce;

  /// Throws InvalidParameter.
  void validate(int n_species) const;
  /// 10 * picard_tol * N * M
  double solver_slack(int reduced_species, int cells) const { return 10.0 * picard_tol * reduced_species * cells; }
};

struct LinearSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

/// Unknown index of species i in cell m.
inline int dof(int m, int i, int reduced_species) { return m * reduced_species + i; }

struct PicardIterate {
  EntropyField w;
  /// Relative residual of the linear solve.
  double linear_residual = 0.0;
};

struct StepResult {
  EntropyField w_new;
  int iterations = 0;
  double final_increment = 0.0;
  double linear_residual = 0.0;
  /// Damping in effect when the step converged.
  double theta = 1.0;
  int damping_restarts = 0;
};

/// Floors every species at eta and rescales the excess so the state sums to one.
/// Input rows hold all N+1 species. Throws InadmissibleInitialData.
ConcentrationField regularize_initial(const ConcentrationField& c0, double eta);

/// Assembles the symmetric positive definite system for one fixed-point iteration.
LinearSystem assemble_linear_system(const MixtureSpec& spec, const Grid1D& grid, const SchemeParams& params,
                                    const EntropyField& w_bar, const ConcentrationField& c_prev);

/// Solves an assembled system by sparse Cholesky with iterative refinement.
/// Throws LinearSolveFailure when the relative residual stays above 1e-12.
Eigen::VectorXd solve_system(const LinearSystem& sys, double* relative_residual = nullptr);

/// One damped iteration: (1 - theta) w_bar + theta * solve.
PicardIterate picard_step(const MixtureSpec& spec, const Grid1D& grid, const SchemeParams& params,
                          const EntropyField& w_bar, const ConcentrationField& c_prev, double theta);

/// Iterates picard_step from w_prev until the increment drops below picard_tol.
/// Throws NonlinearDivergence, propagates LinearSolveFailure.
StepResult advance_step(const MixtureSpec& spec, const Grid1D& grid, const SchemeParams& params,
                        const EntropyField& w_prev);

}  // namespace mstefan
