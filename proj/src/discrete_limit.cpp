#include "specwig/discrete_limit.hpp"

#include <algorithm>
#include <cmath>

#include "specwig/eig.hpp"
#include "specwig/errors.hpp"
#include "specwig/rng.hpp"

namespace specwig {

namespace {
constexpr double kTwoPi = 2.0 * kPi;

bool resonant(double theta) {
  return std::abs(std::remainder(theta, kTwoPi)) < 1e-12;
}

// Cyclic Jacobi with eigenvectors; fine for the small Gram matrices here.
void jacobi_eigen(const SymmetricMatrix& m, std::vector<double>& eigvals,
                  std::vector<double>& vecs) {
  const int n = m.dim();
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = m.at(i, j);
  vecs.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) vecs[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto A = [&](int i, int j) -> double& {
    return a[static_cast<std::size_t>(i) * n + j];
  };
  auto V = [&](int i, int j) -> double& {
    return vecs[static_cast<std::size_t>(i) * n + j];
  };

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
    if (off < 1e-26 * std::max(1.0, m.frobenius_sq())) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (A(p, q) == 0.0) continue;
        double theta = 0.5 * (A(q, q) - A(p, p)) / A(p, q);
        double t;
        if (std::abs(theta) > 1e12)
          t = 0.5 / theta;
        else
          t = std::copysign(1.0, theta) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  eigvals.assign(n, 0.0);
  for (int i = 0; i < n; ++i) eigvals[i] = A(i, i);
}

}  // namespace

HarmonicFactorization harmonic_factorization(const AtomSet& atoms,
                                             const VDraws& v, int n) {
  HarmonicFactorization h;
  const std::size_t count =
      std::min({atoms.size(), v.v.size(), static_cast<std::size_t>(n)});
  h.terms.reserve(4 * count);
  for (std::size_t k = 0; k < count; ++k) {
    const Atom& a = atoms.atoms()[k];
    const double amp = std::sqrt(a.weight);
    const double v1 = v.v[k].first, v2 = v.v[k].second;
    h.terms.push_back({amp * v1, Trig::cos, a.x, Trig::cos, a.y});
    h.terms.push_back({-amp * v1, Trig::sin, a.x, Trig::sin, a.y});
    h.terms.push_back({amp * v2, Trig::sin, a.x, Trig::cos, a.y});
    h.terms.push_back({amp * v2, Trig::cos, a.x, Trig::sin, a.y});
  }
  return h;
}

double cesaro_limit(Trig a, double wa, Trig b, double wb) {
  if (a == Trig::cos && b == Trig::cos)
    return 0.5 * (resonant(wa - wb) + resonant(wa + wb));
  if (a == Trig::sin && b == Trig::sin)
    return 0.5 * (static_cast<double>(resonant(wa - wb)) -
                  static_cast<double>(resonant(wa + wb)));
  return 0.0;  // mixed sin/cos averages vanish
}

GramLimit gram_limit(const HarmonicFactorization& h) {
  const int terms = static_cast<int>(h.terms.size());
  GramLimit g;
  g.dim = 2 * terms;
  g.c.assign(static_cast<std::size_t>(g.dim) * g.dim, 0.0);
  auto col_kind = [&](int c) {
    const HarmonicTerm& t = h.terms[c / 2];
    return (c % 2 == 0) ? t.u_kind : t.v_kind;
  };
  auto col_freq = [&](int c) {
    const HarmonicTerm& t = h.terms[c / 2];
    return (c % 2 == 0) ? t.u_freq : t.v_freq;
  };
  for (int i = 0; i < g.dim; ++i) {
    const double wi = std::sqrt(std::abs(h.terms[i / 2].amplitude));
    for (int j = i; j < g.dim; ++j) {
      const double wj = std::sqrt(std::abs(h.terms[j / 2].amplitude));
      double val = wi * wj *
                   cesaro_limit(col_kind(i), col_freq(i), col_kind(j),
                                col_freq(j));
      g.c[static_cast<std::size_t>(i) * g.dim + j] = val;
      g.c[static_cast<std::size_t>(j) * g.dim + i] = val;
    }
  }
  return g;
}

SymmetricMatrix sym_sqrt_psd(const SymmetricMatrix& c, double clamp_tol) {
  const int n = c.dim();
  std::vector<double> lam, q;
  jacobi_eigen(c, lam, q);
  const double scale = std::max(1.0, c.max_abs());
  for (double& l : lam) {
    if (l < -clamp_tol * scale)
      throw ConvergenceError(
          "matrix is not positive semidefinite: eigenvalue " +
          std::to_string(l));
    l = l > 0.0 ? std::sqrt(l) : 0.0;
  }
  SymmetricMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += q[static_cast<std::size_t>(i) * n + k] * lam[k] *
             q[static_cast<std::size_t>(j) * n + k];
      out.set_sym(i, j, s);
    }
  }
  return out;
}

PointMeasure xi_from_draws(const AtomSet& atoms, const VDraws& v, int n) {
  HarmonicFactorization h = harmonic_factorization(atoms, v, n);
  if (h.terms.empty()) return PointMeasure{};
  GramLimit g = gram_limit(h);
  const int d = g.dim;

  SymmetricMatrix c(d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) c.set_sym(i, j, g.at(i, j));
  SymmetricMatrix s = sym_sqrt_psd(c);

  // signature pairing of each term's two columns
  std::vector<double> sign(h.terms.size());
  for (std::size_t k = 0; k < h.terms.size(); ++k) {
    double a = h.terms[k].amplitude;
    sign[k] = a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
  }

  // M = S P S with P(2k, 2k+1) = P(2k+1, 2k) = sign_k (0-based columns)
  SymmetricMatrix msp(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < h.terms.size(); ++k) {
        if (sign[k] == 0.0) continue;
        int a = 2 * static_cast<int>(k), b = a + 1;
        acc += sign[k] * (s.at(i, a) * s.at(b, j) + s.at(i, b) * s.at(a, j));
      }
      msp.set_sym(i, j, acc);
    }
  }

  EigenSpectrum spec = eigenvalues(msp);
  double top = 0.0;
  for (double v2 : spec.values) top = std::max(top, std::abs(v2));
  return point_measure_from_values(spec.values, 1e-12 * std::max(1.0, top));
}

PointMeasure sample_xi(const AtomSet& atoms, int n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("sample_xi needs n >= 1");
  int count = std::min<int>(n, static_cast<int>(atoms.size()));
  return xi_from_draws(atoms, draw_v(seed, count), n);
}

std::vector<double> xi_second_moment_stat(const AtomSet& atoms, int n,
                                          int trials, std::uint64_t seed) {
  if (atoms.empty() || atoms.total_weight() <= 0.0)
    throw ConfigError("xi_second_moment_stat needs atoms with positive mass");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  std::vector<double> out;
  out.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    PointMeasure xi = sample_xi(atoms, n, derive_trial_seed(seed, t));
    out.push_back(abs_moment(xi, 2));
  }
  return out;
}

}  // namespace specwig
