#include "specwig/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "specwig/errors.hpp"
#include "specwig/kernels.hpp"

namespace specwig {

namespace {

// Householder reduction of a full symmetric matrix to tridiagonal form,
// eigenvalues only.  The working copy stays (numerically) symmetric, so the
// reflected column can be read from contiguous rows.
void tridiagonalize(std::vector<double>& a, int n, std::vector<double>& d,
                    std::vector<double>& sub) {
  auto row = [&](int i) { return a.data() + static_cast<std::size_t>(i) * n; };
  std::vector<double> v(n), p(n), q(n);

  d.assign(n, 0.0);
  // subdiagonal in sub[0..n-2]; one spare slot for the QL rotation sweep
  sub.assign(n, 0.0);

  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    if (l == 0) {
      sub[0] = row(1)[0];
      continue;
    }
    double scale = 0.0;
    for (int k = 0; k <= l; ++k) scale += std::abs(row(i)[k]);
    if (scale == 0.0) {
      sub[l] = row(i)[l];
      continue;
    }
    double h = 0.0;
    for (int k = 0; k <= l; ++k) {
      v[k] = row(i)[k] / scale;
      h += v[k] * v[k];
    }
    double f = v[l];
    double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
    sub[l] = scale * g;
    h -= f * g;
    v[l] = f - g;

    // p = A v / h over the leading (l+1) x (l+1) block
    for (int j = 0; j <= l; ++j) p[j] = kernels::dot(row(j), v.data(), l + 1) / h;
    double k_corr = kernels::dot(p.data(), v.data(), l + 1) / (2.0 * h);
    for (int j = 0; j <= l; ++j) q[j] = p[j] - k_corr * v[j];

    // rank-2 update A -= v q^T + q v^T
    for (int j = 0; j <= l; ++j)
      kernels::axpy2(-v[j], q.data(), -q[j], v.data(), row(j), l + 1);
  }
  for (int i = 0; i < n; ++i) d[i] = row(i)[i];
}

// QL iteration with implicit shifts on (d, sub); sub[i] couples d[i], d[i+1].
void ql_implicit(std::vector<double>& d, std::vector<double>& sub, int n) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int max_sweeps = 64;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m)
        if (std::abs(sub[m]) <= eps * (std::abs(d[m]) + std::abs(d[m + 1])))
          break;
      if (m != l) {
        if (iter++ == max_sweeps)
          throw ConvergenceError(
              "eigenvalue iteration did not converge: matrix size " +
              std::to_string(n) + ", residual " + std::to_string(std::abs(sub[l])));
        double g = (d[l + 1] - d[l]) / (2.0 * sub[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + sub[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, pshift = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * sub[i];
          double b = c * sub[i];
          r = std::hypot(f, g);
          sub[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= pshift;
            sub[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - pshift;
          r = (d[i] - g) * s + 2.0 * c * b;
          pshift = s * r;
          d[i + 1] = g + pshift;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= pshift;
        sub[l] = g;
        sub[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

EigenSpectrum eigenvalues(const SymmetricMatrix& a) {
  const int n = a.dim();
  EigenSpectrum out;
  out.dim = n;
  if (n == 0) return out;

  std::vector<double> work(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      work[static_cast<std::size_t>(i) * n + j] = a.at(i, j);

  std::vector<double> d, sub;
  tridiagonalize(work, n, d, sub);
  ql_implicit(d, sub, n);
  std::sort(d.begin(), d.end());
  out.values = std::move(d);
  return out;
}

double trace_power(const SymmetricMatrix& a, int p) {
  if (p < 1) throw ConfigError("trace_power needs p >= 1");
  if (p > 8) throw ConfigError("trace_power supports p <= 8");
  const int n = a.dim();
  if (p == 1) return a.trace();
  if (p == 2) return a.frobenius_sq();

  std::vector<double> b(static_cast<std::size_t>(n) * n);
  std::vector<double> c(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      b[static_cast<std::size_t>(i) * n + j] = a.at(i, j);
  for (int step = 2; step < p; ++step) {
    std::fill(c.begin(), c.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const double* brow = b.data() + static_cast<std::size_t>(i) * n;
      double* crow = c.data() + static_cast<std::size_t>(i) * n;
      for (int k = 0; k < n; ++k)
        if (brow[k] != 0.0) kernels::axpy(brow[k], a.row(k), crow, n);
    }
    std::swap(b, c);
  }
  // Tr(B * A) with B = A^(p-1)
  double tr = 0.0;
  for (int i = 0; i < n; ++i)
    tr += kernels::dot(b.data() + static_cast<std::size_t>(i) * n, a.row(i), n);
  return tr;
}

}  // namespace specwig
