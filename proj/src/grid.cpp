#include "mstefan/grid.hpp"

#include "mstefan/errors.hpp"

#include <cmath>
#include <vector>

namespace mstefan {

Grid1D::Grid1D(double length, int cells) : length_(length), cells_(cells), h_(0.0) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCode::InvalidParameter, "grid length must be positive");
  }
  if (cells < 2) throw Error(ErrorCode::InvalidParameter, "grid needs at least 2 cells");
  h_ = length / cells;
}

Eigen::VectorXd Grid1D::centers() const {
  Eigen::VectorXd x(cells_);
  for (int m = 0; m < cells_; ++m) x(m) = center(m);
  return x;
}

FaceArray face_gradient(const Grid1D& grid, const Field& f) {
  const int M = grid.cells();
  if (f.rows() != M) throw Error(ErrorCode::DimensionMismatch, "field rows != cells");
  FaceArray g = FaceArray::Zero(M + 1, f.cols());
  for (int m = 1; m < M; ++m) g.row(m) = (f.row(m) - f.row(m - 1)) / grid.h();
  return g;
}

Field divergence(const Grid1D& grid, const FaceArray& flux) {
  const int M = grid.cells();
  if (flux.rows() != M + 1) throw Error(ErrorCode::DimensionMismatch, "face array rows != cells + 1");
  Field div(M, flux.cols());
  for (int m = 0; m < M; ++m) div.row(m) = (flux.row(m + 1) - flux.row(m)) / grid.h();
  return div;
}

SparseMatrix neumann_laplacian(const Grid1D& grid) {
  const int M = grid.cells();
  const double s = 1.0 / (grid.h() * grid.h());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(3 * M);
  for (int m = 0; m < M; ++m) {
    double diag = 0.0;
    if (m > 0) {
      t.emplace_back(m, m - 1, s);
      diag -= s;
    }
    if (m + 1 < M) {
      t.emplace_back(m, m + 1, s);
      diag -= s;
    }
    t.emplace_back(m, m, diag);
  }
  SparseMatrix L(M, M);
  L.setFromTriplets(t.begin(), t.end());
  return L;
}

Eigen::VectorXd integrate(const Grid1D& grid, const Field& f) {
  if (f.rows() != grid.cells()) throw Error(ErrorCode::DimensionMismatch, "field rows != cells");
  return f.colwise().sum().transpose() * grid.h();
}

}  // namespace mstefan
