#include "mstefan/mixture.hpp"

#include "mstefan/errors.hpp"
#include "mstefan/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mstefan {

namespace {

void require_strict(const ConcVector& c, double eps, const char* where) {
  if (!c.strictly_admissible(eps)) {
    throw Error(ErrorCode::NotStrictlyAdmissible, std::string(where) + " needs c_i > 0 and sum(c') < 1");
  }
}

void require_size(const MixtureSpec& spec, const ConcVector& c) {
  if (c.species() != spec.species()) {
    throw Error(ErrorCode::DimensionMismatch, "concentration has " + std::to_string(c.species()) +
                                                  " components, mixture has " + std::to_string(spec.species()));
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// ConcVector / EntropyVector

ConcVector ConcVector::from_reduced(const Vector& reduced) {
  Vector full(reduced.size() + 1);
  full.head(reduced.size()) = reduced;
  full(reduced.size()) = 1.0 - reduced.sum();
  return ConcVector(std::move(full));
}

ConcVector ConcVector::from_full(Vector full) { return ConcVector(std::move(full)); }

bool ConcVector::admissible(double tol) const {
  if (!full_.allFinite()) return false;
  if ((full_.array() < -tol).any()) return false;
  return full_.head(reduced_size()).sum() <= 1.0 + tol;
}

bool ConcVector::strictly_admissible(double eps) const {
  if (!full_.allFinite()) return false;
  if ((full_.array() < eps).any() || !(full_.array() > 0.0).all()) return false;
  return full_.head(reduced_size()).sum() <= 1.0 - eps;
}

EntropyVector::EntropyVector(Vector w) : w_(std::move(w)) {
  if (!w_.allFinite()) {
    throw Error(ErrorCode::InvalidParameter, "entropy variables must be finite");
  }
}

std::string to_string(ProductionLaw::Kind kind) {
  switch (kind) {
    case ProductionLaw::Kind::Zero: return "zero";
    case ProductionLaw::Kind::QuaternaryReversible: return "quaternary";
    case ProductionLaw::Kind::Custom: return "custom";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// MixtureSpec

MixtureSpec::MixtureSpec(int n_species, const Matrix& diffusivities, ProductionLaw production)
    : n_species_(n_species), D_(diffusivities), production_(std::move(production)) {
  if (n_species < 3) {
    throw Error(ErrorCode::DimensionMismatch, "need at least 3 species, got " + std::to_string(n_species));
  }
  if (D_.rows() != n_species || D_.cols() != n_species) {
    throw Error(ErrorCode::DimensionMismatch, "D must be " + std::to_string(n_species) + "x" +
                                                  std::to_string(n_species));
  }
  for (int i = 0; i < n_species; ++i) {
    for (int j = 0; j < n_species; ++j) {
      if (i != j && !(D_(i, j) > 0.0 && std::isfinite(D_(i, j)))) {
        std::ostringstream os;
        os << "D(" << i + 1 << "," << j + 1 << ") = " << D_(i, j);
        throw Error(ErrorCode::NonPositiveOffDiagonal, os.str());
      }
    }
  }
  for (int i = 0; i < n_species; ++i) {
    for (int j = i + 1; j < n_species; ++j) {
      const double scale = std::max(std::abs(D_(i, j)), std::abs(D_(j, i)));
      if (std::abs(D_(i, j) - D_(j, i)) > 1e-12 * scale) {
        std::ostringstream os;
        os << "D(" << i + 1 << "," << j + 1 << ") != D(" << j + 1 << "," << i + 1 << ")";
        throw Error(ErrorCode::NonSymmetricD, os.str());
      }
    }
  }

  d_ = Matrix::Zero(n_species, n_species);
  delta_ = std::numeric_limits<double>::infinity();
  Delta_ = 0.0;
  for (int i = 0; i < n_species; ++i) {
    D_(i, i) = 0.0;
    for (int j = 0; j < n_species; ++j) {
      if (i == j) continue;
      d_(i, j) = 1.0 / D_(i, j);
      delta_ = std::min(delta_, d_(i, j));
      Delta_ += 2.0 * d_(i, j);
    }
  }

  switch (production_.kind()) {
    case ProductionLaw::Kind::Zero:
      break;
    case ProductionLaw::Kind::QuaternaryReversible:
      if (n_species != 5) {
        throw Error(ErrorCode::WrongSpeciesCount, "quaternary reversible law needs 5 species, got " +
                                                      std::to_string(n_species));
      }
      break;
    case ProductionLaw::Kind::Custom:
      for (const auto& t : production_.terms()) {
        if (t.species < 0 || t.species >= n_species - 1) {
          throw Error(ErrorCode::DimensionMismatch,
                      "custom term targets species " + std::to_string(t.species + 1) + "; allowed 1.." +
                          std::to_string(n_species - 1));
        }
        if (static_cast<int>(t.exponents.size()) != n_species) {
          throw Error(ErrorCode::DimensionMismatch, "custom term needs one exponent per species");
        }
      }
      production_check_ = check_production_law(production_, n_species);
      if (!production_check_.sums_to_zero) {
        warnings_.push_back("custom production rates do not sum to zero on all samples");
      }
      if (!production_check_.entropy_dissipating) {
        std::ostringstream os;
        os << "custom production violates sum r_i log c_i <= 0; only the weakened bound with C_r = "
           << production_check_.c_r << " holds on the samples";
        warnings_.push_back(os.str());
      }
      break;
  }
}

bool MixtureSpec::equal_diffusivities(double rel_tol) const {
  const double ref = D_(0, 1);
  for (int i = 0; i < n_species_; ++i) {
    for (int j = 0; j < n_species_; ++j) {
      if (i != j && std::abs(D_(i, j) - ref) > rel_tol * ref) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Matrices

Matrix assemble_A(const MixtureSpec& spec, const ConcVector& c) {
  require_size(spec, c);
  const int n = spec.species();
  Matrix A(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      A(i, j) = spec.d(i, j) * c[i];
      diag -= spec.d(i, j) * c[j];
    }
    A(i, i) = diag;
  }
  return A;
}

Matrix assemble_A_S(const MixtureSpec& spec, const ConcVector& c) {
  require_size(spec, c);
  require_strict(c, kAdmissibilityEps, "A_S");
  Matrix A = assemble_A(spec, c);
  const int n = spec.species();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) A(i, j) = spec.d(i, j) * std::sqrt(c[i] * c[j]);
    }
  }
  return A;
}

Matrix assemble_A0(const MixtureSpec& spec, const ConcVector& c) {
  require_size(spec, c);
  const int N = spec.reduced();
  Matrix A0(N, N);
  for (int i = 0; i < N; ++i) {
    const double d_last = spec.d(i, N);
    double diag = d_last;
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      A0(i, j) = -(spec.d(i, j) - d_last) * c[i];
      diag += (spec.d(i, j) - d_last) * c[j];
    }
    A0(i, i) = diag;
  }
  return A0;
}

Matrix invert_A0(const MixtureSpec& spec, const ConcVector& c) {
  const Matrix A0 = assemble_A0(spec, c);
  const int N = spec.reduced();
  Eigen::PartialPivLU<Matrix> lu(A0);
  Matrix inv = lu.solve(Matrix::Identity(N, N));
  const double residual = (A0 * inv - Matrix::Identity(N, N)).cwiseAbs().maxCoeff();
  if (!inv.allFinite() || !(residual <= 1e-10)) {
    std::ostringstream os;
    os << "A0 inverse residual " << residual;
    throw Error(ErrorCode::SingularA0, os.str());
  }
  return inv;
}

double a0_inverse_bound(const MixtureSpec& spec) {
  const int N = spec.reduced();
  double K = 0.0;
  for (int i = 0; i < N; ++i) {
    double Ki = std::abs(spec.d(i, N));
    for (int k = 0; k < N; ++k) {
      if (k != i) Ki += std::abs(spec.d(i, k) - spec.d(i, N));
    }
    K = std::max(K, Ki);
  }
  return factorial(N - 1) * std::pow(K, N - 1) * std::pow(spec.delta(), -N);
}

double mobility_entry_bound(const MixtureSpec& spec) { return 0.5 * a0_inverse_bound(spec); }

Matrix hessian_H(const ConcVector& c) {
  require_strict(c, kAdmissibilityEps, "H");
  const int N = c.reduced_size();
  Matrix H = Matrix::Constant(N, N, 1.0 / c.last());
  for (int i = 0; i < N; ++i) H(i, i) += 1.0 / c[i];
  return H;
}

Matrix inverse_H(const ConcVector& c) {
  const int N = c.reduced_size();
  Matrix eta(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      eta(i, j) = (i == j) ? (1.0 - c[i]) * c[i] : -c[i] * c[j];
    }
  }
  return eta;
}

Matrix assemble_B(const MixtureSpec& spec, const ConcVector& c) {
  const Matrix alpha = invert_A0(spec, c);
  const int N = spec.reduced();
  Matrix B(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      // b_ij = alpha_ij (1 - c_j) c_j - sum_{k != j} alpha_ik c_k c_j
      double b = alpha(i, j) * (1.0 - c[j]) * c[j];
      for (int k = 0; k < N; ++k) {
        if (k != j) b -= alpha(i, k) * c[k] * c[j];
      }
      B(i, j) = b;
    }
  }
  return B;
}

// ---------------------------------------------------------------------------
// Entropy variables

ConcVector w_to_c(const EntropyVector& w) {
  const int N = w.size();
  const double shift = std::max(0.0, N > 0 ? w.values().maxCoeff() : 0.0);
  Vector full(N + 1);
  double denom = std::exp(-shift);
  full(N) = denom;
  for (int i = 0; i < N; ++i) {
    full(i) = std::exp(w[i] - shift);
    denom += full(i);
  }
  full /= denom;
  return ConcVector::from_full(std::move(full));
}

EntropyVector c_to_w(const ConcVector& c, double eps) {
  require_strict(c, eps, "c_to_w");
  const int N = c.reduced_size();
  Vector w(N);
  const double log_last = std::log(c.last());
  for (int i = 0; i < N; ++i) w(i) = std::log(c[i]) - log_last;
  return EntropyVector(std::move(w));
}

double xlogx_minus_x(double x) { return x > 0.0 ? x * (std::log(x) - 1.0) : 0.0; }

double entropy_density(const ConcVector& c) {
  double h = 0.0;
  for (int i = 0; i < c.species(); ++i) h += xlogx_minus_x(c[i]);
  return h;
}

// ---------------------------------------------------------------------------
// Production

Vector production_rates(const ProductionLaw& law, const ConcVector& c) {
  const int n = c.species();
  Vector r = Vector::Zero(n);
  switch (law.kind()) {
    case ProductionLaw::Kind::Zero:
      break;
    case ProductionLaw::Kind::QuaternaryReversible: {
      if (n != 5) {
        throw Error(ErrorCode::WrongSpeciesCount, "quaternary reversible law needs 5 species");
      }
      const double rate = c[1] * c[3] - c[0] * c[2];
      r(0) = rate;
      r(2) = rate;
      r(1) = -rate;
      r(3) = -rate;
      break;
    }
    case ProductionLaw::Kind::Custom: {
      for (const auto& t : law.terms()) {
        double m = t.coefficient;
        for (int j = 0; j < n; ++j) {
          if (t.exponents[j] != 0.0) m *= std::pow(c[j], t.exponents[j]);
        }
        r(t.species) += m;
      }
      r(n - 1) = -r.head(n - 1).sum();
      break;
    }
  }
  return r;
}

ProductionCheck check_production_law(const ProductionLaw& law, int n_species, int samples,
                                     unsigned long long seed) {
  ProductionCheck out;
  Rng rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const ConcVector c = ConcVector::from_full(sample_simplex(rng, n_species, 1e-12));
    const Vector r = production_rates(law, c);
    if (std::abs(r.sum()) > 1e-12 * std::max(1.0, r.cwiseAbs().maxCoeff())) out.sums_to_zero = false;
    double s_log = 0.0;
    for (int i = 0; i < n_species; ++i) s_log += r(i) * std::log(c[i]);
    worst = std::max(worst, s_log);
  }
  if (samples > 0 && worst > 0.0) {
    out.entropy_dissipating = false;
    out.c_r = worst;
  }
  return out;
}

}  // namespace mstefan
