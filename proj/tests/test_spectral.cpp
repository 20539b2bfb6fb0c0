#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mstefan/errors.hpp"
#include "mstefan/sampling.hpp"
#include "mstefan/spectral.hpp"

#include <algorithm>
#include <cmath>

using namespace mstefan;

namespace {

Matrix equal_D(int n, double v) {
  Matrix D = Matrix::Constant(n, n, v);
  D.diagonal().setZero();
  return D;
}

Matrix D123() {
  Matrix D(3, 3);
  D << 0, 1, 2, 1, 0, 3, 2, 3, 0;
  return D;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<int>(v.size()));
  int k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

}  // namespace

TEST_CASE("symmetric spectrum examples") {
  CHECK((symmetric_spectrum(Matrix::Identity(3, 3)) - Vector::Ones(3)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((symmetric_spectrum(vec({3, 1, 2}).asDiagonal().toDenseMatrix()) - vec({1, 2, 3})).cwiseAbs().maxCoeff() <
        1e-15);
  Matrix M(2, 2);
  M << 6, 3, 3, 6;
  CHECK((symmetric_spectrum(M) - vec({3, 9})).cwiseAbs().maxCoeff() < 1e-14);
  M(0, 1) = 4;
  CHECK_THROWS_AS(symmetric_spectrum(M), Error);
}

TEST_CASE("symmetric spectrum backward error") {
  Rng rng(5);
  std::normal_distribution<double> g;
  for (int s = 0; s < 200; ++s) {
    const int n = 2 + static_cast<int>(rng() % 6);
    Matrix X(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) X(i, j) = g(rng);
    const Matrix M = X + X.transpose();
    const Vector ev = symmetric_spectrum(M);
    REQUIRE(std::is_sorted(ev.data(), ev.data() + n));
    REQUIRE(std::abs(ev.sum() - M.trace()) <= 1e-10 * M.norm());
    REQUIRE(std::abs(ev.squaredNorm() - M.squaredNorm()) <= 1e-10 * M.squaredNorm());
  }
}

TEST_CASE("spectrum of -A for equal diffusivities") {
  const MixtureSpec spec(3, equal_D(3, 1.0));
  Rng rng(3);
  for (int s = 0; s < 100; ++s) {
    const ConcVector c = ConcVector::from_full(sample_simplex(rng, 3));
    const SpectrumReport r = certify_A_spectrum(spec, c);
    REQUIRE((r.eigenvalues - vec({0, 1, 1})).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(r.in_band);
    REQUIRE(r.zero_multiplicity == 1);
    REQUIRE(r.delta == 1.0);
    REQUIRE(r.Delta == 12.0);
  }
}

TEST_CASE("spectrum of -A for a non-trivial ternary") {
  const MixtureSpec spec(3, D123());
  const SpectrumReport r = certify_A_spectrum(spec, ConcVector::from_full(vec({0.2, 0.3, 0.5})));
  CHECK(r.zero_multiplicity == 1);
  CHECK(r.in_band);
  CHECK(r.certified(1));
}

TEST_CASE("exact kernel detection with zero tolerance") {
  const MixtureSpec spec(3, equal_D(3, 1.0));
  const ConcVector c = ConcVector::from_full(vec({0.25, 0.25, 0.5}));
  CHECK((assemble_A(spec, c) * c.full()).cwiseAbs().maxCoeff() == 0.0);
  const SpectrumReport r = certify_A_spectrum(spec, c, 0.0);
  CHECK(r.zero_multiplicity == 1);
  CHECK(r.tol == 0.0);
  // The band edge is exact too, so rounding may put delta itself just outside.
  CHECK(std::abs(r.eigenvalues(1) - 1.0) < 1e-15);
  CHECK(std::abs(r.eigenvalues(2) - 1.0) < 1e-15);
}

TEST_CASE("spectrum of A0 examples") {
  const MixtureSpec eq(4, equal_D(4, 0.5));
  const SpectrumReport r = certify_A0_spectrum(eq, ConcVector::from_full(vec({0.1, 0.2, 0.3, 0.4})));
  CHECK((r.eigenvalues - Vector::Constant(3, 2.0)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(r.certified(0));

  const MixtureSpec spec(3, D123());
  const SpectrumReport s = certify_A0_spectrum(spec, ConcVector::from_reduced(vec({0.2, 0.3})));
  CHECK(s.eigenvalues(0) == doctest::Approx(0.3898).epsilon(1e-3));
  CHECK(s.eigenvalues(1) == doctest::Approx(0.7269).epsilon(1e-3));
  CHECK(s.certified(0));

  const SpectrumReport corner = certify_A0_spectrum(spec, ConcVector::from_reduced(vec({0.0, 0.0})));
  CHECK(corner.eigenvalues(0) == doctest::Approx(1.0 / 3.0));
  CHECK(corner.eigenvalues(1) == doctest::Approx(0.5));
  CHECK(corner.certified(0));
}

TEST_CASE("random spectra certify and A0 spectrum matches -A minus its kernel") {
  Rng rng(29);
  for (int s = 0; s < 1000; ++s) {
    const int n = 3 + static_cast<int>(rng() % 3);
    const MixtureSpec spec(n, sample_diffusivities(rng, n, 0.1, 10.0));
    const ConcVector c = ConcVector::from_full(sample_simplex(rng, n));
    const SpectrumReport a = certify_A_spectrum(spec, c);
    const SpectrumReport a0 = certify_A0_spectrum(spec, c);
    REQUIRE(a.certified(1));
    REQUIRE(a0.certified(0));
    Vector joined(n);
    joined << 0.0, a0.eigenvalues;
    std::sort(joined.data(), joined.data() + n);
    REQUIRE((joined - a.eigenvalues).cwiseAbs().maxCoeff() <= 1e-8);
    // Frobenius bound on the spectral radius.
    const double frob = assemble_A(spec, c).norm();
    REQUIRE(a.eigenvalues(n - 1) <= frob + 1e-12);
    REQUIRE(frob < spec.Delta());
  }
}

TEST_CASE("rank one spectrum") {
  CHECK((rank_one_spectrum(vec({1, 0}), vec({1, 0})) - vec({0, 1})).cwiseAbs().maxCoeff() == 0.0);
  CHECK((rank_one_spectrum(vec({1, 2}), vec({3, -1})) - vec({0, 1})).cwiseAbs().maxCoeff() == 0.0);
  const Vector sc = vec({0.2, 0.3, 0.5}).cwiseSqrt();
  CHECK((rank_one_spectrum(sc, sc) - vec({0, 0, 1})).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(rank_one_spectrum(vec({1, 2}), vec({1, 2, 3})), Error);

  Rng rng(31);
  std::normal_distribution<double> g;
  for (int s = 0; s < 200; ++s) {
    const int n = 2 + static_cast<int>(rng() % 5);
    Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = g(rng);
    const Vector a = rank_one_spectrum(x, x);
    const Vector b = symmetric_spectrum(x * x.transpose());
    REQUIRE((a - b).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, x.squaredNorm()));
  }
}

TEST_CASE("structure flags") {
  const MixtureSpec spec(3, D123());
  const StructureFlags f = structure_flags(assemble_A(spec, ConcVector::from_full(vec({0.2, 0.3, 0.5}))));
  CHECK(f.quasi_positive);
  CHECK(f.irreducible);

  Matrix block = Matrix::Zero(4, 4);
  block.topLeftCorner(2, 2) << -1, 1, 1, -1;
  block.bottomRightCorner(2, 2) << -1, 1, 1, -1;
  CHECK_FALSE(structure_flags(block).irreducible);
  CHECK(structure_flags(block).quasi_positive);

  const StructureFlags neg = structure_flags(-Matrix::Identity(3, 3));
  CHECK(neg.quasi_positive);
  CHECK_FALSE(neg.irreducible);

  CHECK_FALSE(structure_flags(Matrix::Zero(3, 3)).quasi_positive);
  Matrix neg_off = Matrix::Ones(2, 2);
  neg_off(0, 1) = -1;
  CHECK_FALSE(structure_flags(neg_off).quasi_positive);
}
