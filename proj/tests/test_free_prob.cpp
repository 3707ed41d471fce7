#include <doctest.h>

#include <cmath>

#include "specwig/errors.hpp"
#include "specwig/free_prob.hpp"
#include "specwig/nc_comb.hpp"
#include "specwig/spectral_measure.hpp"

using namespace specwig;

namespace {

// quadrature of x^k against the semicircle density, test-side oracle
double wsl_moment_oracle(double gamma, int k) {
  const double edge = 2.0 * std::sqrt(gamma);
  const int m = 400000;
  const double h = 2.0 * edge / m;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    double x = -edge + (i + 0.5) * h;
    double density = std::sqrt(std::max(0.0, 4.0 - x * x / gamma)) /
                     (2.0 * kPi * std::sqrt(gamma));
    acc += std::pow(x, k) * density * h;
  }
  return acc;
}

}  // namespace

TEST_SUITE("free_prob") {

TEST_CASE("semicircle moments") {
  MomentSequence one = wsl_moments(1.0, 6);
  CHECK(one.at(2) == doctest::Approx(1.0));
  CHECK(one.at(4) == doctest::Approx(2.0));
  CHECK(one.at(6) == doctest::Approx(5.0));
  CHECK(one.at(1) == 0.0);
  CHECK(one.at(3) == 0.0);
  for (int k : {2, 4, 6})
    CHECK(one.at(k) == doctest::Approx(wsl_moment_oracle(1.0, k)).epsilon(1e-4));

  double g = 8.0 * std::sqrt(kPi);
  CHECK(wsl_moments(g, 2).at(2) == doctest::Approx(g));
  for (double gamma : {0.5, 2.0, 11.0})
    CHECK(wsl_moments(gamma, 2).at(2) == doctest::Approx(gamma));
  CHECK_THROWS_AS(wsl_moments(-1.0, 4), ConfigError);
}

TEST_CASE("eta moments for flat and indicator profiles") {
  const double scale = 2.0 * std::sqrt(2.0) * kPi;
  const double c = 0.4;
  MomentSequence flat = eta_moments([c](double) { return c; }, 4);
  for (int k = 1; k <= 4; ++k)
    CHECK(flat.at(k) == doctest::Approx(std::pow(scale * c, k)));

  MomentSequence half =
      eta_moments([](double x) { return std::abs(x) <= kPi / 2 ? 1.0 : 0.0; }, 4);
  for (int k = 1; k <= 4; ++k)
    CHECK(half.at(k) == doctest::Approx(std::pow(scale, k) / 2.0).epsilon(1e-3));
}

TEST_CASE("divergent second moment is detected and flagged") {
  auto r = [](double x) {
    return x == 0.0 ? 1e18 : 1.0 / std::sqrt(std::abs(x));
  };
  try {
    eta_moments(r, 2);
    FAIL("expected a divergent-moment error");
  } catch (const DivergentMomentError& e) {
    CHECK(e.order() == 2);
  }
  // the first moment alone settles
  MomentSequence first = eta_moments(r, 1);
  CHECK(first.at(1) > 0.0);
}

TEST_CASE("free multiplicative convolution with the unit semicircle") {
  MomentSequence point_one;  // all moments of delta_1 are 1
  point_one.moments = {1.0, 1.0, 1.0};
  for (int m = 1; m <= 3; ++m)
    CHECK(free_mult_semicircle(point_one, m) ==
          doctest::Approx(static_cast<double>(catalan(m))));

  MomentSequence centered;  // first moment zero kills every block product
  centered.moments = {0.0, 2.0, 0.0};
  for (int m = 1; m <= 3; ++m)
    CHECK(free_mult_semicircle(centered, m) == 0.0);

  MomentSequence partial;
  partial.moments = {1.0};
  CHECK_THROWS_AS(free_mult_semicircle(partial, 2), ConfigError);
}

TEST_CASE("two-point profile reproduces the bernoulli product law") {
  const double scale = 2.0 * std::sqrt(2.0) * kPi;
  MomentSequence eta;
  eta.moments.resize(3);
  for (int k = 1; k <= 3; ++k) eta.moments[k - 1] = std::pow(scale, k) / 2.0;
  CHECK(free_mult_semicircle(eta, 1) == doctest::Approx(2.0 * kPi * kPi));
  for (int m = 1; m <= 3; ++m)
    CHECK(free_mult_semicircle(eta, m) ==
          doctest::Approx(product_law_bw_moments(m)));
  CHECK(product_law_bw_moments(1) == doctest::Approx(2.0 * kPi * kPi));
  CHECK(product_law_bw_moments(2) == doctest::Approx(16.0 * std::pow(kPi, 4)));
}

TEST_CASE("scaling the variable scales the prediction geometrically") {
  MomentSequence eta;
  eta.moments = {0.7, 1.1, 2.3};
  const double c = 1.9;
  MomentSequence scaled;
  scaled.moments.resize(3);
  for (int k = 1; k <= 3; ++k)
    scaled.moments[k - 1] = std::pow(c, k) * eta.moments[k - 1];
  for (int m = 1; m <= 3; ++m)
    CHECK(free_mult_semicircle(scaled, m) ==
          doctest::Approx(std::pow(c, 2 * m) * free_mult_semicircle(eta, m)));
}

TEST_CASE("order one reduces to the squared first moment") {
  MomentSequence eta;
  eta.moments = {1.37, 9.9};
  CHECK(free_mult_semicircle(eta, 1) == doctest::Approx(1.37 * 1.37));
  // for the box profile this equals twice the density mass
  const double scale = 2.0 * std::sqrt(2.0) * kPi;
  double m1 = scale / 2.0;  // indicator of half the circle
  SpectralDensity box = make_density("box_indicator", nlohmann::json::object());
  CHECK(m1 * m1 == doctest::Approx(2.0 * l1_norm(box)));
}

}  // TEST_SUITE
