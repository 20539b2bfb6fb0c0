#pragma once

#include "mstefan/mixture.hpp"

#include <random>

namespace mstefan {

using Rng = std::mt19937_64;

/// Uniform point of the open probability simplex with n components, each at least `floor`.
Vector sample_simplex(Rng& rng, int n, double floor = 0.0);

/// Symmetric diffusivity matrix with off-diagonal entries log-uniform in [lo, hi].
Matrix sample_diffusivities(Rng& rng, int n, double lo, double hi);

}  // namespace mstefan
