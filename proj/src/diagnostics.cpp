#include "mstefan/diagnostics.hpp"

#include "mstefan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mstefan {

double entropy_functional(const Grid1D& grid, const ConcentrationField& c) {
  if (c.rows() != grid.cells()) throw Error(ErrorCode::DimensionMismatch, "field rows != cells");
  double sum = 0.0;
  for (int m = 0; m < c.rows(); ++m) {
    for (int i = 0; i < c.cols(); ++i) sum += xlogx_minus_x(c(m, i));
  }
  return sum * grid.h();
}

double relative_entropy(const Grid1D& grid, const ConcentrationField& c, const Vector& reference) {
  if (reference.size() != c.cols()) throw Error(ErrorCode::BadReference, "reference has wrong length");
  if (!(reference.array() > 0.0).all() || std::abs(reference.sum() - 1.0) > 1e-12) {
    throw Error(ErrorCode::BadReference, "reference must be strictly positive and sum to one");
  }
  if (c.rows() != grid.cells()) throw Error(ErrorCode::DimensionMismatch, "field rows != cells");
  double sum = 0.0;
  for (int m = 0; m < c.rows(); ++m) {
    for (int i = 0; i < c.cols(); ++i) {
      const double x = c(m, i);
      if (x > 0.0) sum += x * std::log(x / reference(i));
    }
  }
  return sum * grid.h();
}

Dissipation dissipation(const MixtureSpec& spec, const Grid1D& grid, const ConcentrationField& c,
                        const EntropyField& w) {
  const int M = grid.cells();
  const int N = spec.reduced();
  if (c.rows() != M || w.rows() != M || c.cols() != N + 1 || w.cols() != N) {
    throw Error(ErrorCode::DimensionMismatch, "state fields do not match grid and mixture");
  }
  if ((concentrations_from(w) - c).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::InconsistentFields, "c differs from w_to_c(w)");
  }
  const double h = grid.h();
  std::vector<Matrix> B(M);
  for (int m = 0; m < M; ++m) B[m] = assemble_B(spec, cell_conc(c, m));

  Dissipation out;
  const Field sqrt_c = c.array().sqrt();
  for (int f = 1; f < M; ++f) {
    const Vector gw = (w.row(f) - w.row(f - 1)).transpose() / h;
    const Matrix Bf = 0.5 * (B[f - 1] + B[f]);
    out.raw += h * gw.dot(Bf * gw);
    out.sqrt_form += h * ((sqrt_c.row(f) - sqrt_c.row(f - 1)) / h).squaredNorm();
  }
  return out;
}

double regularization_norm(const Grid1D& grid, const EntropyField& w) {
  const Field Lw = neumann_laplacian(grid) * w;
  return (Lw.squaredNorm() + w.squaredNorm()) * grid.h();
}

FluxReconstruction reconstruct_fluxes(const MixtureSpec& spec, const Grid1D& grid, const ConcentrationField& c) {
  const int M = grid.cells();
  const int N = spec.reduced();
  if (c.rows() != M || c.cols() != N + 1) {
    throw Error(ErrorCode::DimensionMismatch, "concentration field does not match grid and mixture");
  }
  for (int m = 0; m < M; ++m) {
    if (!cell_conc(c, m).strictly_admissible()) {
      throw Error(ErrorCode::NotStrictlyAdmissible, "flux reconstruction needs strictly admissible cells");
    }
  }
  FluxReconstruction out;
  out.fluxes = FaceArray::Zero(M + 1, N + 1);
  out.gradients = face_gradient(grid, c);
  out.gradients.col(N) = -out.gradients.leftCols(N).rowwise().sum();
  out.noise_floor = 8.0 * std::numeric_limits<double>::epsilon() / grid.h();
  out.gradient_scale = out.gradients.cwiseAbs().maxCoeff();
  for (int f = 1; f < M; ++f) {
    const ConcVector cf = ConcVector::from_full(0.5 * (c.row(f - 1) + c.row(f)).transpose());
    const Vector grad = out.gradients.row(f).transpose();
    Vector J(N + 1);
    J.head(N) = -invert_A0(spec, cf) * grad.head(N);
    J(N) = -J.head(N).sum();
    out.fluxes.row(f) = J.transpose();
    for (int i = 0; i <= N; ++i) {
      double res = grad(i);
      for (int j = 0; j <= N; ++j) {
        if (j != i) res += (cf[j] * J(i) - cf[i] * J(j)) * spec.d(i, j);
      }
      out.residual = std::max(out.residual, std::abs(res));
    }
  }
  return out;
}

UphillEvent strongest_uphill(const FluxReconstruction& flux, double rel_threshold) {
  const Field work = flux.fluxes.cwiseProduct(flux.gradients);
  const double scale = work.cwiseAbs().maxCoeff();
  UphillEvent ev;
  if (scale == 0.0) return ev;
  for (int f = 0; f < work.rows(); ++f) {
    for (int i = 0; i < work.cols(); ++i) {
      if (std::abs(flux.gradients(f, i)) <= flux.noise_floor) continue;
      if (work(f, i) > rel_threshold * scale && work(f, i) > ev.strength) {
        ev.face = f;
        ev.species = i;
        ev.strength = work(f, i);
      }
    }
  }
  return ev;
}

Vector l1_distance(const Grid1D& grid, const ConcentrationField& c, const Vector& reference) {
  if (reference.size() != c.cols()) throw Error(ErrorCode::BadReference, "reference has wrong length");
  Vector out = Vector::Zero(c.cols());
  for (int m = 0; m < c.rows(); ++m) out += (c.row(m).transpose() - reference).cwiseAbs();
  return out * grid.h();
}

DiagnosticsRecord make_record(const MixtureSpec& spec, const Grid1D& grid, const ConcentrationField& c,
                              const EntropyField& w, const Vector& reference, double time) {
  DiagnosticsRecord rec;
  rec.time = time;
  rec.entropy = entropy_functional(grid, c);
  rec.relative_entropy = relative_entropy(grid, c, reference);
  const Dissipation dis = dissipation(spec, grid, c, w);
  rec.dissipation_raw = dis.raw;
  rec.dissipation_sqrt = dis.sqrt_form;
  rec.regularization = regularization_norm(grid, w);
  rec.masses = integrate(grid, c);
  rec.w_integrals = integrate(grid, w);
  if (spec.production().is_zero()) {
    rec.production_integrals = Vector::Zero(spec.species());
  } else {
    Field r(c.rows(), c.cols());
    for (int m = 0; m < c.rows(); ++m) {
      r.row(m) = production_rates(spec.production(), cell_conc(c, m)).transpose();
    }
    rec.production_integrals = integrate(grid, r);
  }
  rec.min_c = c.minCoeff();
  return rec;
}

DecayFit fit_decay_rate(const std::vector<DiagnosticsRecord>& records, double t0, double t1) {
  std::vector<double> t, y;
  for (const auto& r : records) {
    if (r.time < t0 || r.time > t1) continue;
    if (!(r.relative_entropy > 0.0)) {
      throw Error(ErrorCode::NonPositiveEntropy, "relative entropy is not positive inside the fit window");
    }
    t.push_back(r.time);
    y.push_back(std::log(r.relative_entropy));
  }
  if (t.size() < 10) {
    throw Error(ErrorCode::InsufficientData, "need at least 10 records in the fit window, have " +
                                                 std::to_string(t.size()));
  }
  const double n = static_cast<double>(t.size());
  double tm = 0.0, ym = 0.0;
  for (size_t k = 0; k < t.size(); ++k) {
    tm += t[k];
    ym += y[k];
  }
  tm /= n;
  ym /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (size_t k = 0; k < t.size(); ++k) {
    stt += (t[k] - tm) * (t[k] - tm);
    sty += (t[k] - tm) * (y[k] - ym);
    syy += (y[k] - ym) * (y[k] - ym);
  }
  if (stt == 0.0) throw Error(ErrorCode::InsufficientData, "all fit points share one time");
  const double slope = sty / stt;
  double ss_res = 0.0;
  for (size_t k = 0; k < t.size(); ++k) {
    const double e = y[k] - (ym + slope * (t[k] - tm));
    ss_res += e * e;
  }
  DecayFit fit;
  fit.lambda = -slope;
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.points = static_cast<int>(t.size());
  return fit;
}

DecayFit fit_decay_rate(const std::vector<DiagnosticsRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::InsufficientData, "no records");
  const double t0 = records.front().time;
  const double t1 = records.back().time;
  return fit_decay_rate(records, t0 + 0.5 * (t1 - t0), t1);
}

bool AuditVerdict::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.passed; });
}

const AuditCheck* AuditVerdict::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

AuditVerdict audit_step(const MixtureSpec& spec, const Grid1D& grid, const SchemeParams& params,
                        const StepState& prev, const StepState& next) {
  const int N = spec.reduced();
  const int M = grid.cells();
  const DiagnosticsRecord& a = prev.record;
  const DiagnosticsRecord& b = next.record;
  const double tau = b.tau;
  AuditVerdict v;
  v.time = b.time;

  {
    double allowance = params.solver_slack(N, M);
    if (!spec.production_check().entropy_dissipating) {
      allowance += spec.production_check().c_r * tau * grid.length();
    }
    const double lhs = b.entropy + 4.0 * tau / spec.Delta() * b.dissipation_sqrt +
                       params.eps * tau * b.regularization;
    const double margin = a.entropy + allowance - lhs;
    v.checks.push_back({"entropy_inequality", margin >= 0.0, margin});
  }

  {
    constexpr double kMassTol = 1e-10;
    double margin = std::numeric_limits<double>::infinity();
    const Vector dm = b.masses - a.masses;
    if (spec.production().is_zero()) {
      for (int i = 0; i < N; ++i) {
        margin = std::min(margin, params.eps * tau * std::abs(b.w_integrals(i)) + kMassTol - std::abs(dm(i)));
      }
      margin = std::min(margin, params.eps * tau * b.w_integrals.cwiseAbs().sum() + kMassTol - std::abs(dm(N)));
    } else {
      for (int i = 0; i < N; ++i) {
        const double residual = std::abs(dm(i) + params.eps * tau * b.w_integrals(i) -
                                         tau * b.production_integrals(i));
        margin = std::min(margin, kMassTol - residual);
      }
    }
    v.checks.push_back({"mass_drift", margin >= 0.0, margin});
  }

  {
    double worst_last = std::numeric_limits<double>::infinity();
    for (int m = 0; m < M; ++m) {
      worst_last = std::min(worst_last, 1.0 - next.c.row(m).head(N).sum());
    }
    const double margin = std::min(next.c.minCoeff(), worst_last);
    v.checks.push_back({"bounds", margin > 0.0, margin});
  }

  {
    const double margin = b.dissipation_raw - 4.0 / spec.Delta() * b.dissipation_sqrt + 1e-9;
    v.checks.push_back({"dissipation_contract", margin >= 0.0, margin});
  }

  {
    const FluxReconstruction flux = reconstruct_fluxes(spec, grid, next.c);
    const double margin = 1e-8 - flux.relative_residual();
    v.checks.push_back({"flux_consistency", margin >= 0.0, margin});
  }
  return v;
}

}  // namespace mstefan
