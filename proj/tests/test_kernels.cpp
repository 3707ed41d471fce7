#include <doctest.h>

#include <cmath>
#include <vector>

#include "specwig/kernels.hpp"
#include "specwig/rng.hpp"

using namespace specwig;

namespace {

struct BackendGuard {
  kernels::Backend saved = kernels::active();
  ~BackendGuard() { kernels::force_backend(saved); }
};

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  GaussianStream g(seed, "kernel-test");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = g.normal(i);
  return v;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar dot matches a plain accumulation") {
  BackendGuard guard;
  kernels::force_backend(kernels::Backend::scalar);
  auto x = random_vec(517, 1);
  auto y = random_vec(517, 2);
  double expect = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) expect += x[i] * y[i];
  CHECK(kernels::dot(x.data(), y.data(), x.size()) == doctest::Approx(expect));
}

TEST_CASE("backends agree: dot within tolerance, axpy bit-identical") {
  if (!kernels::avx2_available()) return;
  BackendGuard guard;
  for (std::size_t n : {0ul, 1ul, 3ul, 4ul, 17ul, 64ul, 1001ul}) {
    auto x = random_vec(n, 10 + n);
    auto y = random_vec(n, 20 + n);
    auto z = random_vec(n, 30 + n);

    kernels::force_backend(kernels::Backend::scalar);
    double dot_s = kernels::dot(x.data(), y.data(), n);
    std::vector<double> axpy_s = y;
    kernels::axpy(0.731, x.data(), axpy_s.data(), n);
    std::vector<double> axpy2_s = z;
    kernels::axpy2(-1.25, x.data(), 0.4, y.data(), axpy2_s.data(), n);

    kernels::force_backend(kernels::Backend::avx2);
    double dot_v = kernels::dot(x.data(), y.data(), n);
    std::vector<double> axpy_v = y;
    kernels::axpy(0.731, x.data(), axpy_v.data(), n);
    std::vector<double> axpy2_v = z;
    kernels::axpy2(-1.25, x.data(), 0.4, y.data(), axpy2_v.data(), n);

    CHECK(std::abs(dot_s - dot_v) <= 1e-12 * (1.0 + std::abs(dot_s)) * (n + 1));
    CHECK(axpy_s == axpy_v);
    CHECK(axpy2_s == axpy2_v);
  }
}

TEST_CASE("forcing avx2 without support is refused") {
  BackendGuard guard;
  if (kernels::avx2_available()) {
    CHECK(kernels::force_backend(kernels::Backend::avx2));
  } else {
    CHECK_FALSE(kernels::force_backend(kernels::Backend::avx2));
  }
}

TEST_CASE("sum_squares equals self dot") {
  auto x = random_vec(333, 99);
  CHECK(kernels::sum_squares(x.data(), x.size()) ==
        doctest::Approx(kernels::dot(x.data(), x.data(), x.size())));
}

}  // TEST_SUITE
