#include "mstefan/spectral.hpp"

#include "mstefan/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

namespace mstefan {

namespace {

void finish_report(SpectrumReport& rep, int kernel_index) {
  rep.zero_multiplicity = 0;
  rep.in_band = true;
  for (int k = 0; k < rep.eigenvalues.size(); ++k) {
    const double lam = rep.eigenvalues(k);
    if (k == kernel_index || std::abs(lam) <= rep.tol) {
      ++rep.zero_multiplicity;
      continue;
    }
    // Open upper end: no tolerance on the Delta side.
    if (!(lam >= rep.delta - rep.tol && lam < rep.Delta)) rep.in_band = false;
  }
}

std::vector<int> reachable(const Matrix& M, bool transpose) {
  const int n = static_cast<int>(M.rows());
  std::vector<int> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n; ++v) {
      const double e = transpose ? M(v, u) : M(u, v);
      if (v != u && e != 0.0 && !seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

double default_spectral_tol(const MixtureSpec& spec) { return 1e-9 * spec.Delta(); }

Vector symmetric_spectrum(const Matrix& M) {
  if (M.rows() != M.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix not square");
  if (M.size() == 0) return Vector();
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw Error(ErrorCode::NotSymmetric, "symmetric eigensolver given a nonsymmetric matrix");
  }
  const Matrix S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues();  // ascending
}

SpectrumReport certify_A_spectrum(const MixtureSpec& spec, const ConcVector& c, double tol) {
  SpectrumReport rep;
  rep.delta = spec.delta();
  rep.Delta = spec.Delta();
  rep.tol = tol < 0.0 ? default_spectral_tol(spec) : tol;
  rep.eigenvalues = symmetric_spectrum(-assemble_A_S(spec, c));

  int kernel_index = -1;
  if (rep.tol == 0.0) {
    const Vector Ac = assemble_A(spec, c) * c.full();
    if (Ac.cwiseAbs().maxCoeff() == 0.0) {
      rep.eigenvalues.cwiseAbs().minCoeff(&kernel_index);
    }
  }
  finish_report(rep, kernel_index);
  return rep;
}

SpectrumReport certify_A0_spectrum(const MixtureSpec& spec, const ConcVector& c, double tol) {
  SpectrumReport rep;
  rep.delta = spec.delta();
  rep.Delta = spec.Delta();
  rep.tol = tol < 0.0 ? default_spectral_tol(spec) : tol;
  const Matrix A0 = assemble_A0(spec, c);
  Eigen::EigenSolver<Matrix> es(A0, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularA0, "eigensolver failed on A0");
  }
  const auto ev = es.eigenvalues();
  Vector re(ev.size());
  bool complex_pair = false;
  for (int k = 0; k < ev.size(); ++k) {
    re(k) = ev(k).real();
    if (std::abs(ev(k).imag()) > 1e-8 * spec.Delta()) complex_pair = true;
  }
  std::sort(re.data(), re.data() + re.size());
  rep.eigenvalues = re;
  finish_report(rep, -1);
  if (complex_pair) rep.in_band = false;
  return rep;
}

Vector rank_one_spectrum(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "rank-one factors differ in length");
  const int n = static_cast<int>(x.size());
  Vector out = Vector::Zero(n);
  if (n == 0) return out;
  out(n - 1) = x.dot(y);
  std::sort(out.data(), out.data() + n);
  return out;
}

StructureFlags structure_flags(const Matrix& M) {
  if (M.rows() != M.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix not square");
  StructureFlags f;
  const int n = static_cast<int>(M.rows());
  if (n == 0) return f;
  bool nonneg_off = true;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && M(i, j) < 0.0) nonneg_off = false;
    }
  }
  f.quasi_positive = nonneg_off && !M.isZero(0.0);

  // Strongly connected iff node 0 reaches everything in the digraph and its reverse.
  const auto fwd = reachable(M, false);
  const auto bwd = reachable(M, true);
  f.irreducible = std::all_of(fwd.begin(), fwd.end(), [](int s) { return s != 0; }) &&
                  std::all_of(bwd.begin(), bwd.end(), [](int s) { return s != 0; });
  return f;
}

}  // namespace mstefan
