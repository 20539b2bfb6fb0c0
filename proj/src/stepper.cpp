#include "mstefan/stepper.hpp"

#include "mstefan/errors.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mstefan {

void SchemeParams::validate(int n_species) const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidParameter, what); };
  if (!(tau > 0.0) || !std::isfinite(tau)) fail("tau must be positive");
  if (!(eps >= 0.0) || !std::isfinite(eps)) fail("eps must be nonnegative");
  if (!(picard_tol > 0.0)) fail("picard_tol must be positive");
  if (picard_max < 1) fail("picard_max must be at least 1");
  if (!(damping_theta > 0.0 && damping_theta <= 1.0)) fail("damping_theta must lie in (0, 1]");
  if (!(eta_floor > 0.0 && eta_floor < 1.0 / n_species)) fail("eta_floor must lie in (0, 1/(N+1))");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) fail("t_end must be nonnegative");
}

ConcentrationField regularize_initial(const ConcentrationField& c0, double eta) {
  const int n = static_cast<int>(c0.cols());
  if (!(eta > 0.0 && eta * n < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "eta must lie in (0, 1/(N+1))");
  }
  constexpr double kTol = 1e-12;
  ConcentrationField out(c0.rows(), n);
  for (int m = 0; m < c0.rows(); ++m) {
    Vector c = c0.row(m).transpose();
    const double reduced_sum = c.head(n - 1).sum();
    if (!c.allFinite() || (c.array() < 0.0).any() || reduced_sum > 1.0 + kTol ||
        std::abs(c.sum() - 1.0) > kTol) {
      std::ostringstream os;
      os << "cell " << m << " is not an admissible composition";
      throw Error(ErrorCode::InadmissibleInitialData, os.str());
    }
    // Recompute the closing species from the others before flooring.
    c(n - 1) = std::max(0.0, 1.0 - reduced_sum);
    Vector excess = (c.array().max(eta) - eta).matrix();
    excess *= (1.0 - n * eta) / excess.sum();
    out.row(m) = (excess.array() + eta).matrix().transpose();
  }
  return out;
}

LinearSystem assemble_linear_system(const MixtureSpec& spec, const Grid1D& grid, const SchemeParams& params,
                                    const EntropyField& w_bar, const ConcentrationField& c_prev) {
  const int M = grid.cells();
  const int N = spec.reduced();
  if (w_bar.rows() != M || w_bar.cols() != N || c_prev.rows() != M || c_prev.cols() != N + 1) {
    throw Error(ErrorCode::DimensionMismatch, "state fields do not match grid and mixture");
  }
  const double h = grid.h();
  const double tau = params.tau;

  std::vector<Matrix> B(M);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(M) * N * (4 * N + 5));

  LinearSystem sys;
  sys.rhs.resize(M * N);

  for (int m = 0; m < M; ++m) {
    const ConcVector cb = w_to_c(EntropyVector(w_bar.row(m).transpose()));
    const Matrix Bm = assemble_B(spec, cb);
    B[m] = 0.5 * (Bm + Bm.transpose());
    const Matrix eta = inverse_H(cb);
    const Vector r = production_rates(spec.production(), cb);
    const Vector wb = w_bar.row(m).transpose();
    const Vector rhs = h * (-(cb.reduced() - c_prev.row(m).head(N).transpose()) / tau + eta * wb / tau +
                            r.head(N));
    sys.rhs.segment(m * N, N) = rhs;
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        double v = h / tau * eta(i, j);
        if (i == j) v += params.eps * h;
        trip.emplace_back(dof(m, i, N), dof(m, j, N), v);
      }
    }
  }

  // Face stiffness with the arithmetic mean of the adjacent cell mobilities.
  for (int f = 1; f < M; ++f) {
    const Matrix Bf = 0.5 * (B[f - 1] + B[f]) / h;
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        const double v = Bf(i, j);
        trip.emplace_back(dof(f - 1, i, N), dof(f - 1, j, N), v);
        trip.emplace_back(dof(f, i, N), dof(f, j, N), v);
        trip.emplace_back(dof(f - 1, i, N), dof(f, j, N), -v);
        trip.emplace_back(dof(f, i, N), dof(f - 1, j, N), -v);
      }
    }
  }

  if (params.eps > 0.0) {
    const SparseMatrix L = neumann_laplacian(grid);
    const SparseMatrix LtL = SparseMatrix(L.transpose()) * L;
    for (int k = 0; k < LtL.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(LtL, k); it; ++it) {
        for (int i = 0; i < N; ++i) {
          trip.emplace_back(dof(static_cast<int>(it.row()), i, N), dof(static_cast<int>(it.col()), i, N),
                            params.eps * h * it.value());
        }
      }
    }
  }

  sys.matrix.resize(M * N, M * N);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

Eigen::VectorXd solve_system(const LinearSystem& sys, double* relative_residual) {
  const double bnorm = sys.rhs.norm();
  if (bnorm == 0.0) {
    if (relative_residual) *relative_residual = 0.0;
    return Eigen::VectorXd::Zero(sys.rhs.size());
  }
  Eigen::SimplicialLLT<SparseMatrix> llt(sys.matrix);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::LinearSolveFailure, "Cholesky factorization failed (matrix not positive definite)");
  }
  Eigen::VectorXd x = llt.solve(sys.rhs);
  double res = (sys.rhs - sys.matrix * x).norm() / bnorm;
  for (int pass = 0; pass < 3 && res > 1e-14; ++pass) {
    x += llt.solve(sys.rhs - sys.matrix * x);
    res = (sys.rhs - sys.matrix * x).norm() / bnorm;
  }
  if (relative_residual) *relative_residual = res;
  if (!x.allFinite() || !(res <= 1e-12)) {
    std::ostringstream os;
    os << "relative residual " << res << " above 1e-12";
    throw Error(ErrorCode::LinearSolveFailure, os.str());
  }
  return x;
}

PicardIterate picard_step(const MixtureSpec& spec, const Grid1D& grid, const SchemeParams& params,
                          const EntropyField& w_bar, const ConcentrationField& c_prev, double theta) {
  const LinearSystem sys = assemble_linear_system(spec, grid, params, w_bar, c_prev);
  PicardIterate out;
  const Eigen::VectorXd x = solve_system(sys, &out.linear_residual);
  const int M = grid.cells();
  const int N = spec.reduced();
  // dof ordering is cell-major, i.e. row-major in the M x N field.
  EntropyField w_solve(M, N);
  for (int m = 0; m < M; ++m) w_solve.row(m) = x.segment(m * N, N).transpose();
  out.w = theta == 1.0 ? w_solve : EntropyField((1.0 - theta) * w_bar + theta * w_solve);
  return out;
}

StepResult advance_step(const MixtureSpec& spec, const Grid1D& grid, const SchemeParams& params,
                        const EntropyField& w_prev) {
  const ConcentrationField c_prev = concentrations_from(w_prev);
  constexpr int kMaxRestarts = 3;
  double theta = params.damping_theta;
  std::vector<double> history;

  for (int restart = 0; restart <= kMaxRestarts; ++restart, theta *= 0.5) {
    history.clear();
    EntropyField w = w_prev;
    int growing = 0;
    bool diverged = false;
    for (int it = 1; it <= params.picard_max; ++it) {
      PicardIterate next = picard_step(spec, grid, params, w, c_prev, theta);
      const double inc = next.w.allFinite() ? (next.w - w).cwiseAbs().maxCoeff()
                                            : std::numeric_limits<double>::infinity();
      if (!std::isfinite(inc)) {
        diverged = true;
        history.push_back(inc);
        break;
      }
      growing = (!history.empty() && inc > history.back()) ? growing + 1 : 0;
      history.push_back(inc);
      w = std::move(next.w);
      if (inc <= params.picard_tol) {
        StepResult res;
        res.w_new = std::move(w);
        res.iterations = it;
        res.final_increment = inc;
        res.linear_residual = next.linear_residual;
        res.theta = theta;
        res.damping_restarts = restart;
        return res;
      }
      if (growing >= 3) {
        diverged = true;
        break;
      }
    }
    if (!diverged) {
      std::ostringstream os;
      os << "no convergence within " << params.picard_max << " iterations (last increment "
         << (history.empty() ? 0.0 : history.back()) << ")";
      throw NonlinearDivergence(os.str(), history);
    }
  }
  std::ostringstream os;
  os << "increments kept growing after " << kMaxRestarts << " damping restarts";
  throw NonlinearDivergence(os.str(), history);
}

}  // namespace mstefan
