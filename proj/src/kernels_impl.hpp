#pragma once

#include <cstddef>

// Internal: backend entry points wired up by the dispatcher in kernels.cpp.

namespace specwig::kernels::scalar_impl {
void axpy(double a, const double* x, double* y, std::size_t n);
void axpy2(double a, const double* x, double b, const double* y, double* z,
           std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
}  // namespace specwig::kernels::scalar_impl

namespace specwig::kernels::avx2_impl {
void axpy(double a, const double* x, double* y, std::size_t n);
void axpy2(double a, const double* x, double b, const double* y, double* z,
           std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
}  // namespace specwig::kernels::avx2_impl
