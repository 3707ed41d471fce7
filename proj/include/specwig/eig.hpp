#pragma once

#include <vector>

#include "specwig/sym_matrix.hpp"

namespace specwig {

struct EigenSpectrum {
  std::vector<double> values;  // ascending
  int dim = 0;
};

// All eigenvalues of a dense symmetric matrix, ascending.  Householder
// reduction to tridiagonal form followed by the QL iteration with implicit
// shifts; throws ConvergenceError when an eigenvalue fails to deflate.
EigenSpectrum eigenvalues(const SymmetricMatrix& a);

// Tr(A^p) by repeated multiplication; eigensolver cross-check (p <= 8).
double trace_power(const SymmetricMatrix& a, int p);

}  // namespace specwig
