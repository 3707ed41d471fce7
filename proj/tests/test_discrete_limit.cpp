#include <doctest.h>

#include <cmath>
#include <vector>

#include "specwig/discrete_limit.hpp"
#include "specwig/eig.hpp"
#include "specwig/errors.hpp"
#include "specwig/rng.hpp"

using namespace specwig;

namespace {

double trig(Trig kind, double arg) {
  return kind == Trig::cos ? std::cos(arg) : std::sin(arg);
}

double partial_average(Trig a, double wa, Trig b, double wb, int terms) {
  double s = 0.0;
  for (int k = 1; k <= terms; ++k) s += trig(a, k * wa) * trig(b, k * wb);
  return s / terms;
}

AtomSet generic_atom() { return AtomSet({{kPi / 3.0, -3.0 * kPi / 5.0, 1.0}}); }

}  // namespace

TEST_SUITE("discrete_limit") {

TEST_CASE("cesaro closed forms against partial sums") {
  CHECK(cesaro_limit(Trig::cos, kPi / 2, Trig::cos, kPi / 2) == doctest::Approx(0.5));
  CHECK(partial_average(Trig::cos, kPi / 2, Trig::cos, kPi / 2, 1000000) ==
        doctest::Approx(0.5).epsilon(2e-3));

  CHECK(cesaro_limit(Trig::cos, kPi, Trig::cos, kPi) == doctest::Approx(1.0));
  CHECK(partial_average(Trig::cos, kPi, Trig::cos, kPi, 100000) ==
        doctest::Approx(1.0));

  for (auto [w, z] : {std::pair{0.8, 1.9}, std::pair{2.4, 2.4}}) {
    CHECK(cesaro_limit(Trig::sin, w, Trig::cos, z) == 0.0);
    CHECK(std::abs(partial_average(Trig::sin, w, Trig::cos, z, 400000)) < 2e-3);
  }
}

TEST_CASE("harmonic factorization: atom at the origin") {
  AtomSet atoms({{0.0, 0.0, 1.44}});
  VDraws v = draw_v(3, 1);
  HarmonicFactorization h = harmonic_factorization(atoms, v, 1);
  REQUIRE(h.terms.size() == 4);
  // reconstruction equals the constant 2 sqrt(a) V1
  const double expect = 2.0 * 1.2 * v.v[0].first;
  double recon = 0.0;
  for (const HarmonicTerm& t : h.terms)
    recon += t.amplitude * (trig(t.u_kind, 1 * t.u_freq) * trig(t.v_kind, 2 * t.v_freq) +
                            trig(t.v_kind, 1 * t.v_freq) * trig(t.u_kind, 2 * t.u_freq));
  CHECK(recon == doctest::Approx(expect));
}

TEST_CASE("harmonic factorization reconstructs the symmetrized field") {
  GaussianStream g(31, "factorization-test");
  for (int rep = 0; rep < 50; ++rep) {
    int count = 1 + rep % 3;
    std::vector<Atom> atoms;
    for (int k = 0; k < count; ++k)
      atoms.push_back({g.uniform(90 * rep + 3 * k) * 2 * kPi - kPi,
                       g.uniform(90 * rep + 3 * k + 1) * 2 * kPi - kPi,
                       0.2 + g.uniform(90 * rep + 3 * k + 2)});
    AtomSet set(atoms);
    VDraws v = draw_v(500 + rep, count);
    GaussianField z = discrete_field_from_draws(set, v, 20);
    HarmonicFactorization h = harmonic_factorization(set, v, count);
    double max_err = 0.0;
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) {
        double direct = z.at(i, j) + z.at(j, i);
        double recon = 0.0;
        for (const HarmonicTerm& t : h.terms)
          recon += t.amplitude *
                   (trig(t.u_kind, (i + 1) * t.u_freq) * trig(t.v_kind, (j + 1) * t.v_freq) +
                    trig(t.v_kind, (i + 1) * t.v_freq) * trig(t.u_kind, (j + 1) * t.u_freq));
        max_err = std::max(max_err, std::abs(direct - recon));
      }
    CHECK(max_err < 1e-10);
  }
}

TEST_CASE("zero-weight atoms produce zero amplitudes") {
  AtomSet atoms({{1.0, 2.0, 0.0}});
  HarmonicFactorization h = harmonic_factorization(atoms, draw_v(9, 1), 1);
  for (const HarmonicTerm& t : h.terms) CHECK(t.amplitude == 0.0);
}

TEST_CASE("gram limit for the origin atom is low rank") {
  AtomSet atoms({{0.0, 0.0, 1.0}});
  HarmonicFactorization h = harmonic_factorization(atoms, draw_v(11, 1), 1);
  GramLimit g = gram_limit(h);
  REQUIRE(g.dim == 8);
  SymmetricMatrix c(8);
  for (int i = 0; i < 8; ++i)
    for (int j = i; j < 8; ++j) c.set_sym(i, j, g.at(i, j));
  EigenSpectrum s = eigenvalues(c);
  int nonzero = 0;
  for (double v : s.values)
    if (std::abs(v) > 1e-10) ++nonzero;
  CHECK(nonzero <= 2);
  // sin columns carry no mass at zero frequency
  for (int i = 0; i < 8; ++i) CHECK(g.at(2, i) == 0.0);
}

TEST_CASE("gram limit matches the finite gram matrix") {
  AtomSet atoms = generic_atom();
  VDraws v = draw_v(13, 1);
  HarmonicFactorization h = harmonic_factorization(atoms, v, 1);
  GramLimit g = gram_limit(h);

  const int n_rows = 100000;
  const int d = g.dim;
  // explicit columns sqrt(|Y_k|) trig(i w)
  std::vector<std::vector<double>> cols(d, std::vector<double>(n_rows));
  for (int c = 0; c < d; ++c) {
    const HarmonicTerm& t = h.terms[c / 2];
    double w = std::sqrt(std::abs(t.amplitude));
    Trig kind = (c % 2 == 0) ? t.u_kind : t.v_kind;
    double freq = (c % 2 == 0) ? t.u_freq : t.v_freq;
    for (int i = 0; i < n_rows; ++i) cols[c][i] = w * trig(kind, (i + 1) * freq);
  }
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      double dot = 0.0;
      for (int i = 0; i < n_rows; ++i) dot += cols[a][i] * cols[b][i];
      CHECK(std::abs(dot / n_rows - g.at(a, b)) < 1e-3);
    }
}

TEST_CASE("psd square root and the clamp") {
  SymmetricMatrix c(3);
  c.set_sym(0, 0, 4.0);
  c.set_sym(1, 1, 1.0);
  c.set_sym(0, 1, 1.5);
  c.set_sym(2, 2, 0.0);
  SymmetricMatrix s = sym_sqrt_psd(c);
  // square back
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += s.at(i, k) * s.at(k, j);
      CHECK(acc == doctest::Approx(c.at(i, j)).epsilon(1e-10));
    }
  SymmetricMatrix bad(2);
  bad.set_sym(0, 0, 1.0);
  bad.set_sym(1, 1, -1.0);
  CHECK_THROWS_AS(sym_sqrt_psd(bad), ConvergenceError);
}

TEST_CASE("eigen measures agree across the two factorization products") {
  // EM(B P B^T) == EM((B^T B)^{1/2} P (B^T B)^{1/2}) at finite size
  GaussianStream g(41, "sylvester-test");
  for (int rep = 0; rep < 10; ++rep) {
    const int n1 = 7, n2 = 4;
    std::vector<double> b(n1 * n2);
    for (auto& v : b) v = g.normal(1000 * rep + (&v - b.data()));
    SymmetricMatrix p(n2);
    for (int i = 0; i < n2; ++i)
      for (int j = i; j < n2; ++j)
        p.set_sym(i, j, g.normal(5000 + 1000 * rep + i * n2 + j));

    SymmetricMatrix lhs(n1);
    for (int i = 0; i < n1; ++i)
      for (int j = i; j < n1; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n2; ++k)
          for (int l = 0; l < n2; ++l)
            acc += b[i * n2 + k] * p.at(k, l) * b[j * n2 + l];
        lhs.set_sym(i, j, acc);
      }

    SymmetricMatrix gram(n2);
    for (int k = 0; k < n2; ++k)
      for (int l = k; l < n2; ++l) {
        double acc = 0.0;
        for (int i = 0; i < n1; ++i) acc += b[i * n2 + k] * b[i * n2 + l];
        gram.set_sym(k, l, acc);
      }
    SymmetricMatrix root = sym_sqrt_psd(gram);
    SymmetricMatrix rhs(n2);
    for (int i = 0; i < n2; ++i)
      for (int j = i; j < n2; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n2; ++k)
          for (int l = 0; l < n2; ++l)
            acc += root.at(i, k) * p.at(k, l) * root.at(l, j);
        rhs.set_sym(i, j, acc);
      }

    PointMeasure ml = em_from_spectrum(eigenvalues(lhs), 1, 1e-8);
    PointMeasure mr = em_from_spectrum(eigenvalues(rhs), 1, 1e-8);
    REQUIRE(ml.pos.size() == mr.pos.size());
    REQUIRE(ml.neg.size() == mr.neg.size());
    CHECK(dp_distance(ml, mr, 2) < 1e-7);
  }
}

TEST_CASE("xi for the origin atom matches the closed form") {
  AtomSet atoms({{0.0, 0.0, 2.25}});
  const std::uint64_t seed = 77;
  VDraws v = draw_v(seed, 1);
  PointMeasure xi = sample_xi(atoms, 1, seed);
  double expect = 2.0 * 1.5 * v.v[0].first;  // 2 sqrt(a) V1
  if (expect > 0) {
    REQUIRE(xi.pos.size() == 1);
    CHECK(xi.pos[0] == doctest::Approx(expect).epsilon(1e-9));
    CHECK(xi.neg.empty());
  } else {
    REQUIRE(xi.neg.size() == 1);
    CHECK(xi.neg[0] == doctest::Approx(expect).epsilon(1e-9));
    CHECK(xi.pos.empty());
  }
}

TEST_CASE("no atoms means the empty point measure") {
  PointMeasure xi = sample_xi(AtomSet(), 2, 5);
  CHECK(xi.pos.empty());
  CHECK(xi.neg.empty());
}

TEST_CASE("coupled distance shrinks with the matrix size") {
  AtomSet atoms = generic_atom();
  VDraws v = draw_v(2025, 1);
  PointMeasure xi = xi_from_draws(atoms, v, 1);
  double prev = 1e18;
  for (int n_size : {100, 200, 400}) {
    GaussianField z = discrete_field_from_draws(atoms, v, n_size);
    PointMeasure em = em_from_spectrum(eigenvalues(assemble_wigner(z)), n_size);
    double d = dp_distance(em, xi, 2);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 0.1);
}

TEST_CASE("rank of the symmetrized harmonic matrix stays bounded") {
  AtomSet atoms = generic_atom();
  const int n_size = 500;
  GaussianField z = discrete_field_from_draws(atoms, draw_v(404, 1), n_size);
  PointMeasure em = em_from_spectrum(eigenvalues(assemble_wigner(z)), n_size, 1e-6);
  CHECK(em.pos.size() + em.neg.size() <= 8);  // 8 n for n = 1 atom
}

TEST_CASE("second-moment statistic is positive and matches the closed form") {
  AtomSet origin({{0.0, 0.0, 1.0}});
  const std::uint64_t seed = 99;
  std::vector<double> stats = xi_second_moment_stat(origin, 1, 50, seed);
  for (int t = 0; t < 50; ++t) {
    VDraws v = draw_v(derive_trial_seed(seed, t), 1);
    double v1 = v.v[0].first;
    CHECK(stats[t] == doctest::Approx(4.0 * v1 * v1).epsilon(1e-9));
    CHECK(stats[t] > 0.0);
  }
  CHECK_THROWS_AS(xi_second_moment_stat(AtomSet(), 1, 5, 1), ConfigError);
}

}  // TEST_SUITE
