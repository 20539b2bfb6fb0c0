#pragma once

// Eigenvalue computation and certification of the spectral band of the
// friction matrices.

#include "mstefan/mixture.hpp"

namespace mstefan {

struct SpectrumReport {
  /// Ascending.
  Vector eigenvalues;
  int zero_multiplicity = 0;
  /// Every nonzero eigenvalue lies in [delta - tol, Delta).
  bool in_band = false;
  double delta = 0.0;
  double Delta = 0.0;
  double tol = 0.0;

  /// Zero count matches and the rest is in band.
  bool certified(int expected_zeros) const { return in_band && zero_multiplicity == expected_zeros; }
};

/// Default zero-detection threshold 1e-9 * Delta.
double default_spectral_tol(const MixtureSpec& spec);

/// Eigenvalues of a symmetric matrix, ascending. Throws NotSymmetric beyond 1e-8 relative asymmetry.
Vector symmetric_spectrum(const Matrix& M);

/// Spectrum of -A(c), computed through the similar symmetric matrix -A_S.
/// A negative `tol` selects the default. With tol == 0 the kernel eigenvalue is
/// identified through A c = 0 instead of a magnitude threshold, and the band
/// edge delta is applied without allowance for rounding.
SpectrumReport certify_A_spectrum(const MixtureSpec& spec, const ConcVector& c, double tol = -1.0);

/// Spectrum of A0(c), computed with a Hessenberg-QR general eigensolver; valid on the closed simplex.
SpectrumReport certify_A0_spectrum(const MixtureSpec& spec, const ConcVector& c, double tol = -1.0);

/// Closed-form spectrum of x (x) y: n-1 zeros and x . y, ascending.
Vector rank_one_spectrum(const Vector& x, const Vector& y);

struct StructureFlags {
  bool quasi_positive = false;
  bool irreducible = false;
};

/// Off-diagonal sign pattern and strong connectivity of the sparsity digraph.
StructureFlags structure_flags(const Matrix& M);

}  // namespace mstefan
