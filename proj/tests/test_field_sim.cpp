#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "specwig/eig.hpp"
#include "specwig/field_sim.hpp"
#include "specwig/rng.hpp"

using namespace specwig;
using nlohmann::json;

namespace {

SpectralMeasure flat_measure(double value) {
  return SpectralMeasure(make_density("constant", json{{"value", value}}),
                         AtomSet());
}

// lag covariance estimate over disjoint square windows; returns per-window
// values so callers can form a mean and a standard error.
std::vector<double> window_lag_cov(const GaussianField& f, int u, int v,
                                   int window) {
  std::vector<double> out;
  for (int bi = 0; bi + window + u <= f.n; bi += window)
    for (int bj = 0; bj + window + v <= f.n; bj += window) {
      double acc = 0.0;
      int count = 0;
      for (int i = bi; i < bi + window - u; ++i)
        for (int j = bj; j < bj + window - v; ++j) {
          acc += f.at(i, j) * f.at(i + u, j + v);
          ++count;
        }
      out.push_back(acc / count);
    }
  return out;
}

double mean_of(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  return m / xs.size();
}

double se_of(const std::vector<double>& xs) {
  double m = mean_of(xs), v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  return std::sqrt(v / (xs.size() - 1) / xs.size());
}

}  // namespace

TEST_SUITE("field_sim") {

TEST_CASE("iid window: single coefficient scales the innovations") {
  const double value = 1.0 / (8.0 * kPi * kPi);
  FieldSamplerConfig cfg{flat_measure(value), 0, 42};
  GaussianField f = sample_ac_field(cfg, 317);  // ~1e5 draws
  double var = 0.0;
  for (double v : f.values) var += v * v;
  var /= f.values.size();
  // N(0, 1/2) entries; 3 sigma band for the sample variance
  CHECK(std::abs(var - 0.5) < 3.0 * 0.5 * std::sqrt(2.0 / f.values.size()));
}

TEST_CASE("zero density gives the zero field") {
  FieldSamplerConfig cfg{flat_measure(0.0), 4, 7};
  GaussianField f = sample_ac_field(cfg, 32);
  for (double v : f.values) CHECK(v == 0.0);
}

TEST_CASE("moving-average lag covariance tracks the truncated autocovariance") {
  FourierTable t(1);
  t.at(0, 0) = 0.6;
  t.at(1, 0) = t.at(-1, 0) = 0.25;
  t.at(0, 1) = t.at(0, -1) = -0.15;
  t.at(1, 1) = t.at(-1, -1) = 0.1;
  GaussianField f = ma_field_from_table(t, 99, 512);
  for (auto [u, v] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{0, 1},
                      std::pair{2, 1}}) {
    auto windows = window_lag_cov(f, u, v, 128);
    double mean = mean_of(windows), se = se_of(windows);
    double target = truncated_autocovariance(t, u, v);
    CHECK(std::abs(mean - target) <= 3.5 * se + 1e-12);
  }
}

TEST_CASE("stationarity: disjoint windows agree") {
  FourierTable t(1);
  t.at(0, 0) = 0.7;
  t.at(1, 1) = t.at(-1, -1) = 0.2;
  GaussianField f = ma_field_from_table(t, 123, 512);
  auto windows = window_lag_cov(f, 1, 0, 128);
  std::vector<double> first(windows.begin(), windows.begin() + windows.size() / 2);
  std::vector<double> second(windows.begin() + windows.size() / 2, windows.end());
  double gap = std::abs(mean_of(first) - mean_of(second));
  double se = std::sqrt(se_of(first) * se_of(first) + se_of(second) * se_of(second));
  CHECK(gap <= 4.0 * se + 1e-12);
}

TEST_CASE("single atom at the origin gives a constant field") {
  AtomSet atoms({{0.0, 0.0, 2.25}});
  VDraws v = draw_v(5, 1);
  GaussianField f = discrete_field_from_draws(atoms, v, 20);
  const double expect = std::sqrt(2.25) * v.v[0].first;  // cos == 1, sin == 0
  for (double val : f.values) CHECK(val == doctest::Approx(expect));
}

TEST_CASE("atom field lag covariance approaches the measure covariance") {
  AtomSet atoms({{0.9, -1.7, 0.8}});
  SpectralMeasure m(std::nullopt, atoms);
  const int trials = 120, N = 48;
  for (auto [u, v] : {std::pair{1, 0}, std::pair{1, 1}}) {
    std::vector<double> estimates;
    for (int t = 0; t < trials; ++t) {
      GaussianField f =
          discrete_field_from_draws(atoms, draw_v(1000 + t, 1), N);
      double acc = 0.0;
      int count = 0;
      for (int i = 0; i < N - u; ++i)
        for (int j = 0; j < N - v; ++j) {
          acc += f.at(i, j) * f.at(i + u, j + v);
          ++count;
        }
      estimates.push_back(acc / count);
    }
    double target = covariance(m, u, v);
    CHECK(std::abs(mean_of(estimates) - target) <= 4.0 * se_of(estimates));
  }
}

TEST_CASE("empty atom list gives the zero field") {
  AtomSet atoms;
  GaussianField f = discrete_field_from_draws(atoms, VDraws{}, 16);
  for (double v : f.values) CHECK(v == 0.0);
}

TEST_CASE("wigner assembly: hand examples") {
  GaussianField zero;
  zero.n = 3;
  zero.values.assign(9, 0.0);
  SymmetricMatrix wz = assemble_wigner(zero);
  CHECK(wz.max_abs() == 0.0);

  GaussianField f;
  f.n = 2;
  f.values = {0.0, 1.0, 3.0, 0.0};  // X(0,1) = 1, X(1,0) = 3
  SymmetricMatrix w = assemble_wigner(f);
  CHECK(w.at(0, 1) == 4.0);
  CHECK(w.at(1, 0) == 4.0);
  CHECK(w.at(0, 0) == 0.0);
  CHECK(w.at(1, 1) == 0.0);
}

TEST_CASE("wigner assembly: entry moments from an iid field") {
  const double value = 1.0 / (8.0 * kPi * kPi);
  FieldSamplerConfig cfg{flat_measure(value), 0, 321};
  GaussianField f = sample_ac_field(cfg, 400);
  SymmetricMatrix w = assemble_wigner(f);
  double off_var = 0.0, diag_var = 0.0;
  std::size_t off_count = 0;
  for (int i = 0; i < w.dim(); ++i) {
    diag_var += w.at(i, i) * w.at(i, i);
    for (int j = i + 1; j < w.dim(); ++j) {
      off_var += w.at(i, j) * w.at(i, j);
      ++off_count;
    }
  }
  off_var /= off_count;
  diag_var /= w.dim();
  CHECK(std::abs(off_var - 1.0) < 3.0 * std::sqrt(2.0 / off_count));
  CHECK(std::abs(diag_var - 2.0) < 3.0 * 2.0 * std::sqrt(2.0 / w.dim()));
}

TEST_CASE("scale: zero, identity, and spectrum doubling") {
  SymmetricMatrix a(2);
  a.set_sym(0, 1, 1.0);  // eigenvalues -1, 1
  SymmetricMatrix z = scale(a, 0.0);
  CHECK(z.max_abs() == 0.0);
  SymmetricMatrix same = scale(a, 1.0);
  CHECK(same.at(0, 1) == a.at(0, 1));
  EigenSpectrum s = eigenvalues(scale(a, 2.0));
  CHECK(s.values[0] == doctest::Approx(-2.0));
  CHECK(s.values[1] == doctest::Approx(2.0));
}

TEST_CASE("reproducibility: identical config gives bit-identical fields") {
  FourierTable t(2);
  t.at(0, 0) = 0.5;
  t.at(1, -1) = t.at(-1, 1) = 0.2;
  GaussianField a = ma_field_from_table(t, 2024, 64);
  GaussianField b = ma_field_from_table(t, 2024, 64);
  CHECK(a.values == b.values);
  AtomSet atoms({{1.1, 0.3, 0.6}});
  GaussianField c = discrete_field_from_draws(atoms, draw_v(2024, 1), 64);
  GaussianField d = discrete_field_from_draws(atoms, draw_v(2024, 1), 64);
  CHECK(c.values == d.values);
}

TEST_CASE("field and matrix csv dumps round numbers through") {
  namespace fs = std::filesystem;
  GaussianField f;
  f.n = 2;
  f.values = {1.5, -2.0, 0.25, 3.0};
  fs::path path = fs::temp_directory_path() / "specwig-field.csv";
  write_field_csv(path.string(), f);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "1.5,-2");
  std::getline(in, line);
  CHECK(line == "0.25,3");
  fs::remove(path);

  SymmetricMatrix a(2);
  a.set_sym(0, 1, 4.0);
  fs::path mpath = fs::temp_directory_path() / "specwig-matrix.csv";
  write_matrix_csv(mpath.string(), a);
  std::ifstream min(mpath);
  std::getline(min, line);
  CHECK(line == "0,4");
  fs::remove(mpath);
}

TEST_CASE("U and V substreams are distinct and the full field is their sum") {
  SpectralMeasure m(make_density("constant", json{{"value", 0.02}}),
                    AtomSet({{0.9, -1.7, 0.8}}));
  FieldSamplerConfig cfg{m, 1, 77};
  GaussianField y = sample_ac_field(cfg, 128);
  GaussianField z = sample_discrete_field(cfg, 128);
  GaussianField x = sample_field(cfg, 128);
  double dot = 0.0, ny = 0.0, nz = 0.0;
  for (std::size_t i = 0; i < y.values.size(); ++i) {
    CHECK(x.values[i] == doctest::Approx(y.values[i] + z.values[i]));
    dot += y.values[i] * z.values[i];
    ny += y.values[i] * y.values[i];
    nz += z.values[i] * z.values[i];
  }
  CHECK(std::abs(dot / std::sqrt(ny * nz)) < 0.05);
}

}  // TEST_SUITE
