#pragma once

// Uniform cell-centered 1D finite volumes on (0, L) with zero-flux boundary faces.

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mstefan {

/// Per-cell vectors: row m holds the values of cell m.
using Field = Eigen::MatrixXd;
/// Per-face vectors: row f holds face f, faces 0 and M are the boundary.
using FaceArray = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

class Grid1D {
 public:
  /// Throws InvalidParameter unless length > 0 and cells >= 2.
  Grid1D(double length, int cells);

  double length() const { return length_; }
  int cells() const { return cells_; }
  double h() const { return h_; }
  double center(int m) const { return (m + 0.5) * h_; }
  Eigen::VectorXd centers() const;

 private:
  double length_;
  int cells_;
  double h_;
};

/// (f_m - f_{m-1}) / h on interior faces, zero on the two boundary faces.
FaceArray face_gradient(const Grid1D& grid, const Field& f);

/// (flux_{m+1} - flux_m) / h per cell.
Field divergence(const Grid1D& grid, const FaceArray& flux);

/// Three-point reflecting Laplacian, equal to divergence(face_gradient(.)).
SparseMatrix neumann_laplacian(const Grid1D& grid);

/// Midpoint quadrature per column.
Eigen::VectorXd integrate(const Grid1D& grid, const Field& f);

}  // namespace mstefan
