#pragma once

#include "mstefan/grid.hpp"
#include "mstefan/mixture.hpp"

namespace mstefan {

/// M x (N+1): all species per cell, rows sum to one.
using ConcentrationField = Field;
/// M x N: entropy variables per cell.
using EntropyField = Field;

inline ConcVector cell_conc(const ConcentrationField& c, int m) {
  return ConcVector::from_full(c.row(m).transpose());
}

/// Cell-wise w_to_c.
ConcentrationField concentrations_from(const EntropyField& w);

/// Cell-wise c_to_w. Throws NotStrictlyAdmissible.
EntropyField entropy_variables_from(const ConcentrationField& c, double eps = kAdmissibilityEps);

}  // namespace mstefan
