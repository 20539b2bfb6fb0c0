#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mstefan/errors.hpp"
#include "mstefan/grid.hpp"

#include <Eigen/Eigenvalues>

#include <random>

using namespace mstefan;

TEST_CASE("grid construction") {
  const Grid1D g(2.0, 8);
  CHECK(g.h() == doctest::Approx(0.25));
  CHECK(std::abs(g.h() * g.cells() - g.length()) <= 1e-12);
  CHECK(g.center(0) == doctest::Approx(0.125));
  CHECK(g.centers()(7) == doctest::Approx(1.875));
  CHECK_THROWS_AS(Grid1D(0.0, 4), Error);
  CHECK_THROWS_AS(Grid1D(1.0, 1), Error);
}

TEST_CASE("face gradient examples") {
  const Grid1D g(1.0, 4);
  CHECK(face_gradient(g, Field::Constant(4, 2, 0.3)).cwiseAbs().maxCoeff() == 0.0);

  const Field lin = g.centers();
  const FaceArray grad = face_gradient(g, lin);
  REQUIRE(grad.rows() == 5);
  CHECK(grad(0, 0) == 0.0);
  CHECK(grad(4, 0) == 0.0);
  for (int f = 1; f < 4; ++f) CHECK(grad(f, 0) == doctest::Approx(1.0));

  Field spike = Field::Zero(4, 1);
  spike(1, 0) = 1.0;
  const FaceArray s = face_gradient(g, spike);
  CHECK(s(1, 0) == doctest::Approx(4.0));
  CHECK(s(2, 0) == doctest::Approx(-4.0));
  CHECK(s(3, 0) == 0.0);

  CHECK_THROWS_AS(face_gradient(g, Field::Zero(3, 1)), Error);
}

TEST_CASE("divergence examples") {
  const Grid1D g(1.0, 6);
  CHECK(divergence(g, FaceArray::Zero(7, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(divergence(g, FaceArray::Zero(6, 2)), Error);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  FaceArray flux(7, 2);
  for (int f = 0; f < 7; ++f)
    for (int k = 0; k < 2; ++k) flux(f, k) = n(rng);
  flux.row(0).setZero();
  flux.row(6).setZero();
  CHECK(integrate(g, divergence(g, flux)).cwiseAbs().maxCoeff() <= 1e-13);

  FaceArray constant = FaceArray::Constant(7, 1, 2.0);
  constant.row(0).setZero();
  constant.row(6).setZero();
  const Field d = divergence(g, constant);
  CHECK(d.middleRows(1, 4).cwiseAbs().maxCoeff() == 0.0);

  Field f(6, 1);
  for (int m = 0; m < 6; ++m) f(m, 0) = n(rng);
  const Field lhs = divergence(g, face_gradient(g, f));
  const Field rhs = neumann_laplacian(g) * f;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("neumann laplacian") {
  const Grid1D g(1.0, 3);
  Eigen::MatrixXd expect(3, 3);
  expect << -1, 1, 0, 1, -2, 1, 0, 1, -1;
  const Eigen::MatrixXd Lap = Eigen::MatrixXd(neumann_laplacian(g));
  CHECK((Lap * g.h() * g.h() - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((Lap * Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-Lap * g.h() * g.h());
  CHECK(std::abs(es.eigenvalues()(0)) < 1e-12);
  CHECK(es.eigenvalues()(1) == doctest::Approx(1.0));
  CHECK(es.eigenvalues()(2) == doctest::Approx(3.0));

  for (int M : {2, 5, 17}) {
    const Grid1D gm(3.0, M);
    const Eigen::MatrixXd L = Eigen::MatrixXd(neumann_laplacian(gm));
    REQUIRE((L - L.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(L).eigenvalues();
    const double scale = 4.0 / (gm.h() * gm.h());
    REQUIRE(ev.maxCoeff() <= 1e-12 * scale);
    int zeros = 0;
    for (int k = 0; k < M; ++k) zeros += std::abs(ev(k)) <= 1e-10 * scale;
    REQUIRE(zeros == 1);
  }
}

TEST_CASE("integrate examples") {
  CHECK(integrate(Grid1D(2.0, 5), Field::Constant(5, 1, 0.7))(0) == doctest::Approx(1.4));
  Field f(4, 1);
  f << 1, 2, 3, 4;
  CHECK(integrate(Grid1D(1.0, 4), f)(0) == doctest::Approx(2.5));
  const Grid1D fine(1.0, 1000);
  CHECK(std::abs(integrate(fine, fine.centers())(0) - 0.5) < 1e-12);
  CHECK_THROWS_AS(integrate(fine, Field::Zero(999, 1)), Error);
}

TEST_CASE("summation by parts on random fields") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  for (int s = 0; s < 200; ++s) {
    const int M = 2 + static_cast<int>(rng() % 40);
    const Grid1D g(0.5 + std::abs(n(rng)), M);
    FaceArray phi(M + 1, 1);
    Field f(M, 1);
    for (int k = 0; k <= M; ++k) phi(k, 0) = n(rng);
    for (int k = 0; k < M; ++k) f(k, 0) = n(rng);
    phi(0, 0) = phi(M, 0) = 0.0;
    const double lhs = divergence(g, phi).cwiseProduct(f).sum() * g.h();
    const double rhs = -face_gradient(g, f).cwiseProduct(phi).sum() * g.h();
    REQUIRE(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}
