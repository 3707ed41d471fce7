#pragma once

#include <cstddef>

// Data-parallel inner loops shared by the field sampler, the eigensolver and
// the matrix-power routines.  A scalar reference implementation always exists;
// an AVX2/FMA variant is selected at runtime when the CPU supports it.
// The scalar axpy/axpy2 use fused multiply-adds so that both backends produce
// bit-identical element-wise results; reductions (dot) differ only in
// association order and are equivalence-tested under a tolerance.

namespace specwig::kernels {

enum class Backend { scalar, avx2 };

Backend active();
const char* backend_name(Backend b);
bool avx2_available();

// Test hook: pin one backend for the current process. Forcing avx2 on a CPU
// without it is rejected (returns false).
bool force_backend(Backend b);

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// z[i] += a * x[i] + b * y[i]
void axpy2(double a, const double* x, double b, const double* y, double* z,
           std::size_t n);

double dot(const double* x, const double* y, std::size_t n);

double sum_squares(const double* x, std::size_t n);

}  // namespace specwig::kernels
