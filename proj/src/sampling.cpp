#include "mstefan/sampling.hpp"

#include <cmath>

namespace mstefan {

Vector sample_simplex(Rng& rng, int n, double floor) {
  std::exponential_distribution<double> expo(1.0);
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = expo(rng);
  x /= x.sum();
  if (floor > 0.0) {
    x = x.array() * (1.0 - n * floor) + floor;
  }
  return x;
}

Matrix sample_diffusivities(Rng& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  Matrix D = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      D(i, j) = D(j, i) = std::exp(u(rng));
    }
  }
  return D;
}

}  // namespace mstefan
