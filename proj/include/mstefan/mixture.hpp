#pragma once

// Mixture description and the pointwise algebra of isobaric, isothermal
// Maxwell-Stefan diffusion: friction matrices, entropy, entropy variables and
// production rates. Species are indexed 0..N in code; index N is the species
// eliminated through the closure sum(c) = 1.

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mstefan {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Default floor for "strictly admissible": c_i >= eps and sum_{i<N} c_i <= 1 - eps.
inline constexpr double kAdmissibilityEps = 1e-14;

/// Molar fractions of an (N+1)-species mixture. Holds all N+1 components so
/// that the eliminated one keeps full relative precision when it is small.
class ConcVector {
 public:
  ConcVector() = default;

  /// Builds from c' = (c_1..c_N); the last component is 1 - sum(c').
  static ConcVector from_reduced(const Vector& reduced);
  /// Takes all N+1 components as given.
  static ConcVector from_full(Vector full);

  int reduced_size() const { return static_cast<int>(full_.size()) - 1; }
  int species() const { return static_cast<int>(full_.size()); }

  const Vector& full() const { return full_; }
  Vector reduced() const { return full_.head(reduced_size()); }
  double last() const { return full_(reduced_size()); }
  double operator[](int i) const { return full_(i); }

  /// c_i >= -tol for all i and sum of the first N <= 1 + tol.
  bool admissible(double tol = 0.0) const;
  bool strictly_admissible(double eps = kAdmissibilityEps) const;

 private:
  explicit ConcVector(Vector full) : full_(std::move(full)) {}
  Vector full_;
};

/// Entropy variables w_i = log(c_i / c_{N+1}), i < N.
class EntropyVector {
 public:
  EntropyVector() = default;
  explicit EntropyVector(Vector w);

  const Vector& values() const { return w_; }
  int size() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_(i); }

 private:
  Vector w_;
};

/// One monomial source term r_species += coefficient * prod_j c_j^exponents[j].
struct CustomTerm {
  int species = 0;
  double coefficient = 0.0;
  std::vector<double> exponents;
};

class ProductionLaw {
 public:
  enum class Kind { Zero, QuaternaryReversible, Custom };

  static ProductionLaw zero() { return ProductionLaw(Kind::Zero, {}); }
  /// r1 = r3 = c2 c4 - c1 c3, r2 = r4 = -r1, r5 = 0 (five species).
  static ProductionLaw quaternary_reversible() { return ProductionLaw(Kind::QuaternaryReversible, {}); }
  /// Terms may only target species 0..N-1; the last rate closes the sum to zero.
  static ProductionLaw custom(std::vector<CustomTerm> terms) { return ProductionLaw(Kind::Custom, std::move(terms)); }

  Kind kind() const { return kind_; }
  const std::vector<CustomTerm>& terms() const { return terms_; }
  bool is_zero() const { return kind_ == Kind::Zero; }

 private:
  ProductionLaw(Kind kind, std::vector<CustomTerm> terms) : kind_(kind), terms_(std::move(terms)) {}
  Kind kind_;
  std::vector<CustomTerm> terms_;
};

std::string to_string(ProductionLaw::Kind kind);

/// Outcome of sampling the production-rate hypotheses.
struct ProductionCheck {
  bool sums_to_zero = true;
  /// sum_i r_i log c_i <= 0 on every sample.
  bool entropy_dissipating = true;
  /// max(0, sampled max of sum_i r_i log c_i); the weakened-condition constant.
  double c_r = 0.0;
};

/// Validated mixture: species count, Maxwell-Stefan diffusivities and the
/// derived inverse diffusivities with spectral band endpoints.
class MixtureSpec {
 public:
  /// Throws DimensionMismatch, NonSymmetricD, NonPositiveOffDiagonal, WrongSpeciesCount.
  MixtureSpec(int n_species, const Matrix& diffusivities, ProductionLaw production = ProductionLaw::zero());

  int species() const { return n_species_; }
  int reduced() const { return n_species_ - 1; }
  const Matrix& D() const { return D_; }
  /// d_ij = 1 / D_ij off the diagonal, zero on it.
  const Matrix& d() const { return d_; }
  double d(int i, int j) const { return d_(i, j); }
  /// min_{i != j} d_ij
  double delta() const { return delta_; }
  /// 2 * sum_{i != j} d_ij over ordered pairs
  double Delta() const { return Delta_; }
  const ProductionLaw& production() const { return production_; }
  const ProductionCheck& production_check() const { return production_check_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// True when all off-diagonal diffusivities coincide.
  bool equal_diffusivities(double rel_tol = 0.0) const;

 private:
  int n_species_;
  Matrix D_;
  Matrix d_;
  double delta_ = 0.0;
  double Delta_ = 0.0;
  ProductionLaw production_;
  ProductionCheck production_check_;
  std::vector<std::string> warnings_;
};

/// Friction matrix A(c): a_ij = d_ij c_i (i != j), a_ii = -sum_{j != i} d_ij c_j.
Matrix assemble_A(const MixtureSpec& spec, const ConcVector& c);

/// Symmetrization C^{-1/2} A C^{1/2}. Throws NotStrictlyAdmissible.
Matrix assemble_A_S(const MixtureSpec& spec, const ConcVector& c);

/// Reduced N x N matrix with grad c' = -A0 J'.
Matrix assemble_A0(const MixtureSpec& spec, const ConcVector& c);

/// LU with partial pivoting. Throws SingularA0 if the inverse fails its residual check.
Matrix invert_A0(const MixtureSpec& spec, const ConcVector& c);

/// Cramer-rule bound (N-1)! K^{N-1} delta^{-N} on every entry of A0^{-1}.
double a0_inverse_bound(const MixtureSpec& spec);

/// Bound on every entry of B over the closed simplex: half the A0^{-1} bound,
/// since each column of H^{-1} has absolute sum 2 c_j (1 - c_j) <= 1/2.
double mobility_entry_bound(const MixtureSpec& spec);

/// Hessian of the entropy density in c'. Throws NotStrictlyAdmissible.
Matrix hessian_H(const ConcVector& c);

/// Closed form (1 - c_i) c_i on the diagonal, -c_i c_j off it. Valid on the closed simplex.
Matrix inverse_H(const ConcVector& c);

/// Mobility B = A0^{-1} H^{-1}, built entrywise from the closed-form H^{-1}.
/// Not symmetrized: symmetry holds up to rounding.
Matrix assemble_B(const MixtureSpec& spec, const ConcVector& c);

/// c_i = e^{w_i} / (1 + sum_j e^{w_j}), evaluated with a max shift.
ConcVector w_to_c(const EntropyVector& w);

/// w_i = log(c_i / c_{N+1}). Throws NotStrictlyAdmissible.
EntropyVector c_to_w(const ConcVector& c, double eps = kAdmissibilityEps);

/// x (log x - 1) with the continuous extension 0 at x = 0.
double xlogx_minus_x(double x);

/// h(c) = sum_{i=0}^{N} c_i (log c_i - 1).
double entropy_density(const ConcVector& c);

/// Rates for all N+1 species; they sum to zero. Throws WrongSpeciesCount.
Vector production_rates(const ProductionLaw& law, const ConcVector& c);

/// Samples the production-rate hypotheses at `samples` random interior points.
ProductionCheck check_production_law(const ProductionLaw& law, int n_species, int samples = 10000,
                                     unsigned long long seed = 20240611ULL);

}  // namespace mstefan
