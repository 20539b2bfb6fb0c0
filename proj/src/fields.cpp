#include "mstefan/fields.hpp"

namespace mstefan {

ConcentrationField concentrations_from(const EntropyField& w) {
  ConcentrationField c(w.rows(), w.cols() + 1);
  for (int m = 0; m < w.rows(); ++m) {
    c.row(m) = w_to_c(EntropyVector(w.row(m).transpose())).full().transpose();
  }
  return c;
}

EntropyField entropy_variables_from(const ConcentrationField& c, double eps) {
  EntropyField w(c.rows(), c.cols() - 1);
  for (int m = 0; m < c.rows(); ++m) {
    w.row(m) = c_to_w(cell_conc(c, m), eps).values().transpose();
  }
  return w;
}

}  // namespace mstefan
