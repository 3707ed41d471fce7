#include <cmath>

#include "kernels_impl.hpp"

namespace specwig::kernels::scalar_impl {

// std::fma keeps the per-element rounding identical to the FMA vector path.
void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void axpy2(double a, const double* x, double b, const double* y, double* z,
           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    z[i] = std::fma(a, x[i], std::fma(b, y[i], z[i]));
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

}  // namespace specwig::kernels::scalar_impl
