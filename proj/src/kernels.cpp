#include "specwig/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"

namespace specwig::kernels {

namespace {

struct Vtable {
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*axpy2)(double, const double*, double, const double*, double*,
                std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
};

constexpr Vtable kScalar{scalar_impl::axpy, scalar_impl::axpy2,
                         scalar_impl::dot};

#if defined(SPECWIG_HAVE_AVX2_TU)
constexpr Vtable kAvx2{avx2_impl::axpy, avx2_impl::axpy2, avx2_impl::dot};
#endif

bool cpu_has_avx2() {
#if defined(SPECWIG_HAVE_AVX2_TU) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend resolve_initial() {
  const char* env = std::getenv("SPECWIG_KERNELS");
  if (env && std::strcmp(env, "scalar") == 0) return Backend::scalar;
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<const Vtable*> g_vt{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const Vtable* table_for(Backend b) {
#if defined(SPECWIG_HAVE_AVX2_TU)
  if (b == Backend::avx2) return &kAvx2;
#endif
  (void)b;
  return &kScalar;
}

const Vtable* vt() {
  const Vtable* t = g_vt.load(std::memory_order_acquire);
  if (!t) {
    Backend b = resolve_initial();
    g_backend.store(b, std::memory_order_relaxed);
    t = table_for(b);
    g_vt.store(t, std::memory_order_release);
  }
  return t;
}

}  // namespace

bool avx2_available() { return cpu_has_avx2(); }

Backend active() {
  vt();
  return g_backend.load(std::memory_order_relaxed);
}

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

bool force_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_available()) return false;
  g_backend.store(b, std::memory_order_relaxed);
  g_vt.store(table_for(b), std::memory_order_release);
  return true;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  vt()->axpy(a, x, y, n);
}

void axpy2(double a, const double* x, double b, const double* y, double* z,
           std::size_t n) {
  vt()->axpy2(a, x, b, y, z, n);
}

double dot(const double* x, const double* y, std::size_t n) {
  return vt()->dot(x, y, n);
}

double sum_squares(const double* x, std::size_t n) {
  return vt()->dot(x, x, n);
}

}  // namespace specwig::kernels
