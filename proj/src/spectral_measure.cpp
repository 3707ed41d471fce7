#include "specwig/spectral_measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace specwig {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

double wrap_to_pi(double z) {
  double r = std::remainder(z, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

// Average of cos(u*x) over [a, b]; exact factor for piecewise-constant cells.
double avg_cos(double u, double a, double b) {
  if (u == 0.0) return 1.0;
  return (std::sin(u * b) - std::sin(u * a)) / (u * (b - a));
}

double avg_sin(double u, double a, double b) {
  if (u == 0.0) return 0.0;
  return (std::cos(u * a) - std::cos(u * b)) / (u * (b - a));
}

// integral of cos(u*x) * f(x) over [-pi, pi] on an M-cell midpoint grid,
// with optional exact cell masses (used around integrable singularities).
double cos_integral_1d(double u, int m_cells,
                       const SpectralDensity::Eval1D& f,
                       const SpectralDensity::Mass1D& mass) {
  const double h = kTwoPi / m_cells;
  double acc = 0.0;
  for (int i = 0; i < m_cells; ++i) {
    const double a = -kPi + i * h;
    const double b = a + h;
    const double cell = mass ? mass(a, b) : f(0.5 * (a + b)) * h;
    acc += cell * avg_cos(u, a, b);
  }
  return acc;
}

double checked_cos_integral_1d(double u, int m_cells,
                               const SpectralDensity::Eval1D& f,
                               const SpectralDensity::Mass1D& mass,
                               const char* what) {
  double coarse = cos_integral_1d(u, m_cells / 2, f, mass);
  double fine = cos_integral_1d(u, m_cells, f, mass);
  double residual = std::abs(fine - coarse);
  if (!std::isfinite(fine) || residual > 1e-4 * std::max(1.0, std::abs(fine)))
    throw QuadratureError(what, residual);
  return fine;
}

double mass_integral_1d(int m_cells, const SpectralDensity::Eval1D& f,
                        const SpectralDensity::Mass1D& mass) {
  return cos_integral_1d(0.0, m_cells, f, mass);
}

// Midpoint grid aligned to the density's own resolution when that matters
// (piecewise-constant grid densities become exact).
int aligned_cells(const SpectralDensity& f) {
  int m = f.grid_resolution();
  int cells = 256;
  if (m > 0 && cells % m != 0) cells = m * ((255 / m) + 1);
  return cells;
}

struct Complex2D {
  double re = 0.0;
  double im = 0.0;
};

Complex2D fourier_integral_2d(const SpectralDensity& f, double u, double v,
                              int m_cells, bool take_sqrt) {
  const double h = kTwoPi / m_cells;
  Complex2D out;
  for (int i = 0; i < m_cells; ++i) {
    const double x = -kPi + (i + 0.5) * h;
    double row_re = 0.0, row_im = 0.0;
    for (int j = 0; j < m_cells; ++j) {
      const double y = -kPi + (j + 0.5) * h;
      double val = f(x, y);
      if (take_sqrt) val = std::sqrt(std::max(val, 0.0));
      const double phase = u * x + v * y;
      row_re += val * std::cos(phase);
      row_im += val * std::sin(phase);
    }
    out.re += row_re;
    out.im += row_im;
  }
  out.re *= h * h;
  out.im *= h * h;
  return out;
}

}  // namespace

// ---- SpectralDensity -----------------------------------------------------

SpectralDensity::SpectralDensity(std::string name, Eval2D eval,
                                 int grid_resolution)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      grid_resolution_(grid_resolution) {
  if (!eval_) throw ConfigError("spectral density needs an evaluator");
  if (grid_resolution_ <= 0)
    throw ConfigError("grid resolution must be positive");
}

void SpectralDensity::validate() const {
  // offset 0.37 keeps the probes away from axis and cell boundaries, where
  // piecewise-constant densities are allowed to be one-sided
  const int samples = 64;
  const double h = kTwoPi / samples;
  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < samples; ++j) {
      const double x = -kPi + (i + 0.37) * h;
      const double y = -kPi + (j + 0.37) * h;
      const double a = eval_(x, y);
      const double b = eval_(-x, -y);
      if (std::isfinite(a) && a < -1e-12)
        throw ConfigError("density '" + name_ + "' is negative at (" +
                          std::to_string(x) + "," + std::to_string(y) + ")");
      if (std::isfinite(a) && std::isfinite(b) &&
          std::abs(a - b) > 1e-8 * (1.0 + std::abs(a)))
        throw EvennessError("density '" + name_ +
                            "' violates f(x,y)=f(-x,-y)");
    }
  }
}

// ---- AtomSet ---------------------------------------------------------------

AtomSet::AtomSet(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const Atom& a : atoms_) {
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight))
      throw ConfigError("atom weight must be finite and non-negative");
    if (a.x <= -kPi - 1e-12 || a.x > kPi + 1e-12 || a.y <= -kPi - 1e-12 ||
        a.y > kPi + 1e-12)
      throw ConfigError("atom coordinates must lie in (-pi, pi]");
  }
}

double AtomSet::total_weight() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.weight;
  return s;
}

double wrap_rational_pi(long long num, long long den) {
  if (den == 0) throw ConfigError("rational multiple of pi with denominator 0");
  if (den < 0) {
    den = -den;
    num = -num;
  }
  long long two_q = 2 * den;
  long long m = ((num % two_q) + two_q) % two_q;  // in [0, 2q)
  if (m > den) m -= two_q;                        // in (-q, q]
  return kPi * static_cast<double>(m) / static_cast<double>(den);
}

// ---- SpectralMeasure -------------------------------------------------------

SpectralMeasure::SpectralMeasure(std::optional<SpectralDensity> ac, AtomSet d)
    : ac_(std::move(ac)), atoms_(std::move(d)) {
  if (!ac_ && atoms_.empty())
    throw ConfigError(
        "spectral measure needs a density or at least one atom (positive "
        "variance)");
  if (ac_) ac_->validate();
}

// ---- FourierTable ----------------------------------------------------------

FourierTable::FourierTable(int n) : n_(n) {
  if (n < 0) throw ConfigError("truncation radius must be >= 0");
  c_.assign(static_cast<std::size_t>(2 * n + 1) * (2 * n + 1), 0.0);
}

double FourierTable::sum_squares() const {
  double s = 0.0;
  for (double v : c_) s += v * v;
  return s;
}

double FourierTable::max_abs() const {
  double s = 0.0;
  for (double v : c_) s = std::max(s, std::abs(v));
  return s;
}

std::optional<std::pair<std::vector<double>, std::vector<double>>>
FourierTable::factor_rank1() const {
  const int w = 2 * n_ + 1;
  const double top = max_abs();
  if (top == 0.0) {
    return std::make_pair(std::vector<double>(w, 0.0),
                          std::vector<double>(w, 0.0));
  }
  int pk = -n_, pl = -n_;
  for (int k = -n_; k <= n_; ++k)
    for (int l = -n_; l <= n_; ++l)
      if (std::abs(at(k, l)) == top) {
        pk = k;
        pl = l;
      }
  const double pivot = at(pk, pl);
  const double tol = 1e-10 * top * top;
  for (int k = -n_; k <= n_; ++k)
    for (int l = -n_; l <= n_; ++l)
      if (std::abs(at(k, l) * pivot - at(k, pl) * at(pk, l)) > tol)
        return std::nullopt;
  const double r = std::sqrt(std::abs(pivot));
  std::vector<double> rho(w), sig(w);
  for (int k = -n_; k <= n_; ++k) rho[k + n_] = at(k, pl) / r;
  for (int l = -n_; l <= n_; ++l)
    sig[l + n_] = at(pk, l) * r / pivot;
  return std::make_pair(std::move(rho), std::move(sig));
}

// ---- operations ------------------------------------------------------------

double covariance(const SpectralMeasure& m, int u, int v) {
  double total = 0.0;
  for (const Atom& a : m.atoms().atoms())
    total += a.weight * std::cos(u * a.x + v * a.y);
  if (!m.ac()) return total;

  const SpectralDensity& f = *m.ac();
  if (f.separable()) {
    const auto& s = *f.separable();
    double rx = checked_cos_integral_1d(u, 4096, s.fx, s.fx_mass,
                                        "covariance x-factor quadrature");
    double ry = checked_cos_integral_1d(v, 4096, s.fy, s.fy_mass,
                                        "covariance y-factor quadrature");
    return total + rx * ry;
  }
  if (f.diag_shift()) {
    if (u != v) return total;
    const auto& d = *f.diag_shift();
    double g = checked_cos_integral_1d(u, 32768, d.g, d.g_mass,
                                       "covariance diagonal quadrature");
    return total + kTwoPi * g;
  }
  const int cells = aligned_cells(f);
  Complex2D coarse = fourier_integral_2d(f, u, v, cells / 2, false);
  Complex2D fine = fourier_integral_2d(f, u, v, cells, false);
  double residual = std::hypot(fine.re - coarse.re, fine.im - coarse.im);
  if (!std::isfinite(fine.re) ||
      residual > 1e-4 * std::max(1.0, std::abs(fine.re)))
    throw QuadratureError("covariance quadrature did not settle", residual);
  return total + fine.re;
}

FourierTable sqrt_density_coeffs(const SpectralDensity& f, int n) {
  if (n < 0) throw ConfigError("truncation radius must be >= 0");
  FourierTable t(n);

  if (f.separable()) {
    const auto& s = *f.separable();
    std::vector<double> phik(2 * n + 1), psil(2 * n + 1);
    for (int k = -n; k <= n; ++k)
      phik[k + n] = checked_cos_integral_1d(k, 32768, s.sfx, s.sfx_mass,
                                            "sqrt-density x-factor quadrature");
    for (int l = -n; l <= n; ++l)
      psil[l + n] = checked_cos_integral_1d(l, 32768, s.sfy, s.sfy_mass,
                                            "sqrt-density y-factor quadrature");
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l)
        t.at(k, l) = phik[k + n] * psil[l + n] / kTwoPi;
    return t;
  }

  if (f.diag_shift()) {
    const auto& d = *f.diag_shift();
    for (int k = -n; k <= n; ++k)
      t.at(k, k) = checked_cos_integral_1d(
          k, 32768, d.sqrt_g, d.sqrt_g_mass, "sqrt-density diagonal quadrature");
    return t;
  }

  const int cells = aligned_cells(f);
  for (int k = -n; k <= n; ++k) {
    for (int l = -n; l <= n; ++l) {
      Complex2D z = fourier_integral_2d(f, -k, -l, cells, true);
      if (std::abs(z.im) / kTwoPi > 1e-8)
        throw EvennessError("sqrt-density coefficient (" + std::to_string(k) +
                            "," + std::to_string(l) +
                            ") has imaginary residue " +
                            std::to_string(z.im / kTwoPi));
      t.at(k, l) = z.re / kTwoPi;
    }
  }
  return t;
}

double truncated_autocovariance(const FourierTable& t, int u, int v) {
  const int n = t.truncation();
  if (std::abs(u) > 2 * n || std::abs(v) > 2 * n) return 0.0;
  const int klo = std::max(-n, -n - u);
  const int khi = std::min(n, n - u);
  const int llo = std::max(-n, -n - v);
  const int lhi = std::min(n, n - v);
  double s = 0.0;
  for (int k = klo; k <= khi; ++k)
    for (int l = llo; l <= lhi; ++l) s += t.at(k, l) * t.at(k + u, l + v);
  return s;
}

double l1_norm(const SpectralDensity& f) {
  if (f.closed_l1()) return *f.closed_l1();
  if (f.separable()) {
    const auto& s = *f.separable();
    double mx = mass_integral_1d(32768, s.fx, s.fx_mass);
    double my = mass_integral_1d(32768, s.fy, s.fy_mass);
    double coarse = mass_integral_1d(16384, s.fx, s.fx_mass) *
                    mass_integral_1d(16384, s.fy, s.fy_mass);
    double fine = mx * my;
    double residual = std::abs(fine - coarse);
    if (!std::isfinite(fine) || residual > 1e-4 * std::max(1.0, fine))
      throw QuadratureError("l1 norm quadrature diverges", residual);
    return fine;
  }
  if (f.diag_shift()) {
    const auto& d = *f.diag_shift();
    double coarse = mass_integral_1d(16384, d.g, d.g_mass);
    double fine = mass_integral_1d(32768, d.g, d.g_mass);
    double residual = std::abs(fine - coarse);
    if (!std::isfinite(fine) || residual > 1e-4 * std::max(1.0, fine))
      throw QuadratureError("l1 norm quadrature diverges", residual);
    return kTwoPi * fine;
  }
  const int cells = aligned_cells(f);
  double coarse = fourier_integral_2d(f, 0, 0, cells / 2, false).re;
  double fine = fourier_integral_2d(f, 0, 0, cells, false).re;
  double residual = std::abs(fine - coarse);
  if (!std::isfinite(fine) || residual > 1e-4 * std::max(1.0, fine))
    throw QuadratureError("l1 norm quadrature diverges", residual);
  return fine;
}

bool check_t4_condition(const FourierTable& d,
                        const std::vector<std::vector<int>>& windows) {
  const int n = d.truncation();
  for (const auto& window : windows) {
    std::unordered_set<int> in(window.begin(), window.end());
    int reach = n;
    for (int a : window) reach = std::max(reach, std::abs(a));
    for (int j = -2 * reach; j <= 2 * reach; ++j) {
      if (j == 0) continue;
      double s = 0.0;
      for (int k = -n; k <= n; ++k) {
        if (!in.count(k) || !in.count(j + k) || std::abs(j + k) > n) continue;
        for (int l = -n; l <= n; ++l) {
          if (!in.count(l)) continue;
          s += d.at(k, l) * d.at(j + k, l);
        }
      }
      if (std::abs(s) >= 1e-10) return false;
    }
  }
  return true;
}

FourierTable t4_coefficients(const SpectralDensity& f, int n) {
  // When f is swap-symmetric its own structure hints can be reused.
  bool swap_sym = true;
  for (int i = 0; i < 9 && swap_sym; ++i) {
    for (int j = 0; j < 9; ++j) {
      double x = -kPi + (i + 0.5) * kTwoPi / 9;
      double y = -kPi + (j + 0.5) * kTwoPi / 9;
      double a = f(x, y), b = f(y, x);
      if (std::isfinite(a) && std::isfinite(b) &&
          std::abs(a - b) > 1e-10 * (1.0 + std::abs(a))) {
        swap_sym = false;
        break;
      }
    }
  }
  if (swap_sym) return sqrt_density_coeffs(f, n);
  SpectralDensity sym(
      f.name() + "_sym",
      [f](double x, double y) { return 0.5 * (f(x, y) + f(y, x)); },
      f.grid_resolution());
  return sqrt_density_coeffs(sym, n);
}

// ---- registry --------------------------------------------------------------

namespace {

double overlap(double a, double b, double lo, double hi) {
  return std::max(0.0, std::min(b, hi) - std::max(a, lo));
}

// integral of |x|^(-alpha) over [a,b], 0 < alpha < 1
double power_mass(double alpha, double a, double b) {
  auto anti = [alpha](double t) {
    return std::pow(std::abs(t), 1.0 - alpha) / (1.0 - alpha);
  };
  if (a >= 0.0) return anti(b) - anti(a);
  if (b <= 0.0) return anti(a) - anti(b);
  return anti(a) + anti(b);
}

double parse_pi_multiple(const nlohmann::json& v, const char* what) {
  if (v.is_array() && v.size() == 2)
    return wrap_rational_pi(v[0].get<long long>(), v[1].get<long long>());
  if (v.is_number()) {
    double r = std::remainder(v.get<double>(), kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
  }
  throw ConfigError(std::string(what) +
                    ": expected [num, den] (meaning pi*num/den) or a number");
}

SpectralDensity make_constant(const nlohmann::json& p) {
  double value = p.value("value", 1.0 / (8.0 * kPi * kPi));
  if (value < 0.0) throw ConfigError("constant density must be non-negative");
  SpectralDensity d("constant", [value](double, double) { return value; });
  double s = std::sqrt(value), q = std::sqrt(s);
  SpectralDensity::Separable sep;
  sep.fx = sep.fy = [s](double) { return s; };
  sep.sfx = sep.sfy = [q](double) { return q; };
  sep.fx_mass = sep.fy_mass = [s](double a, double b) { return s * (b - a); };
  sep.sfx_mass = sep.sfy_mass = [q](double a, double b) {
    return q * (b - a);
  };
  d.set_separable(std::move(sep));
  d.set_closed_l1(value * 4.0 * kPi * kPi);
  return d;
}

SpectralDensity make_box(const nlohmann::json& p) {
  double hw = kPi / 2.0;
  if (p.contains("half_width_pi"))
    hw = std::abs(parse_pi_multiple(p["half_width_pi"], "half_width_pi"));
  double amp = p.value("amplitude", 1.0);
  if (amp < 0.0 || hw <= 0.0 || hw > kPi)
    throw ConfigError("box indicator needs amplitude >= 0 and half width in (0, pi]");
  SpectralDensity d("box_indicator", [hw, amp](double x, double y) {
    return (std::abs(x) <= hw && std::abs(y) <= hw) ? amp : 0.0;
  });
  double s = std::sqrt(amp), q = std::sqrt(s);
  SpectralDensity::Separable sep;
  sep.fx = sep.fy = [hw, s](double x) { return std::abs(x) <= hw ? s : 0.0; };
  sep.sfx = sep.sfy = [hw, q](double x) { return std::abs(x) <= hw ? q : 0.0; };
  sep.fx_mass = sep.fy_mass = [hw, s](double a, double b) {
    return s * overlap(a, b, -hw, hw);
  };
  sep.sfx_mass = sep.sfy_mass = [hw, q](double a, double b) {
    return q * overlap(a, b, -hw, hw);
  };
  d.set_separable(std::move(sep));
  d.set_closed_l1(amp * 4.0 * hw * hw);
  return d;
}

SpectralDensity make_inv_sqrt_xy(const nlohmann::json& p) {
  double amp = p.value("amplitude", 1.0);
  if (amp < 0.0) throw ConfigError("amplitude must be non-negative");
  SpectralDensity d("inv_sqrt_xy", [amp](double x, double y) {
    double t = std::abs(x * y);
    return t == 0.0 ? std::numeric_limits<double>::infinity()
                    : amp / std::sqrt(t);
  });
  double s = std::sqrt(amp), q = std::sqrt(s);
  SpectralDensity::Separable sep;
  sep.fx = sep.fy = [s](double x) {
    return x == 0.0 ? std::numeric_limits<double>::infinity()
                    : s / std::sqrt(std::abs(x));
  };
  sep.sfx = sep.sfy = [q](double x) {
    return x == 0.0 ? std::numeric_limits<double>::infinity()
                    : q / std::pow(std::abs(x), 0.25);
  };
  sep.fx_mass = sep.fy_mass = [s](double a, double b) {
    return s * power_mass(0.5, a, b);
  };
  sep.sfx_mass = sep.sfy_mass = [q](double a, double b) {
    return q * power_mass(0.25, a, b);
  };
  d.set_separable(std::move(sep));
  d.set_closed_l1(amp * 16.0 * kPi);  // (2 * integral of |x|^{-1/2})^2
  return d;
}

SpectralDensity make_shifted_1d(const nlohmann::json& p) {
  std::string h = p.value("h", std::string("inv_sqrt"));
  double scale = p.value("scale", 1.0);
  if (scale < 0.0) throw ConfigError("scale must be non-negative");
  const double c = scale / kTwoPi;  // f(x,y) = c * h(x+y)

  if (h == "inv_sqrt") {
    auto g = [c](double z) {
      double w = wrap_to_pi(z);
      return w == 0.0 ? std::numeric_limits<double>::infinity()
                      : c / std::sqrt(std::abs(w));
    };
    SpectralDensity d("shifted_1d",
                      [g](double x, double y) { return g(x + y); });
    SpectralDensity::DiagShift ds;
    double sc = std::sqrt(c);
    ds.g = g;
    ds.sqrt_g = [sc](double z) {
      double w = wrap_to_pi(z);
      return w == 0.0 ? std::numeric_limits<double>::infinity()
                      : sc / std::pow(std::abs(w), 0.25);
    };
    ds.g_mass = [c](double a, double b) { return c * power_mass(0.5, a, b); };
    ds.sqrt_g_mass = [sc](double a, double b) {
      return sc * power_mass(0.25, a, b);
    };
    d.set_closed_l1(scale * 4.0 * std::sqrt(kPi));
    d.set_diag_shift(std::move(ds));
    return d;
  }
  if (h == "one_plus_cos") {
    auto g = [c](double z) { return c * (1.0 + std::cos(z)); };
    SpectralDensity d("shifted_1d",
                      [g](double x, double y) { return g(x + y); });
    SpectralDensity::DiagShift ds;
    double sc = std::sqrt(2.0 * c);
    ds.g = g;
    // sqrt(1 + cos z) = sqrt(2) |cos(z/2)|, non-negative on [-pi, pi]
    ds.sqrt_g = [sc](double z) {
      return sc * std::abs(std::cos(0.5 * wrap_to_pi(z)));
    };
    ds.g_mass = [c](double a, double b) {
      return c * ((b - a) + std::sin(b) - std::sin(a));
    };
    ds.sqrt_g_mass = [sc](double a, double b) {
      return sc * 2.0 * (std::sin(0.5 * b) - std::sin(0.5 * a));
    };
    d.set_closed_l1(scale * kTwoPi);
    d.set_diag_shift(std::move(ds));
    return d;
  }
  throw ConfigError("shifted_1d: unknown h '" + h +
                    "' (use inv_sqrt or one_plus_cos)");
}

SpectralDensity make_grid(const nlohmann::json& p) {
  std::vector<double> values;
  int m = 0;
  if (p.contains("values")) {
    values = p["values"].get<std::vector<double>>();
    m = p.value("M", static_cast<int>(std::lround(std::sqrt(
                         static_cast<double>(values.size())))));
  } else if (p.contains("path")) {
    std::ifstream in(p["path"].get<std::string>());
    if (!in) throw ConfigError("grid density: cannot open CSV file");
    std::string line;
    int cols = -1;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string tok;
      int c = 0;
      while (std::getline(ss, tok, ',')) {
        values.push_back(std::stod(tok));
        ++c;
      }
      if (cols < 0)
        cols = c;
      else if (c != cols)
        throw ConfigError("grid density: ragged CSV rows");
    }
    m = cols;
  } else {
    throw ConfigError("grid density needs 'values' or 'path'");
  }
  if (m <= 0 || values.size() != static_cast<std::size_t>(m) * m)
    throw ConfigError("grid density must be a square M x M table");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ConfigError("grid density values must be finite and >= 0");

  auto cell = [m](double t) {
    int i = static_cast<int>((t + kPi) / kTwoPi * m);
    return std::clamp(i, 0, m - 1);
  };
  auto data = std::make_shared<std::vector<double>>(std::move(values));
  SpectralDensity d(
      "grid",
      [data, cell, m](double x, double y) {
        return (*data)[static_cast<std::size_t>(cell(x)) * m + cell(y)];
      },
      m);
  double cell_area = (kTwoPi / m) * (kTwoPi / m);
  d.set_closed_l1(std::accumulate(data->begin(), data->end(), 0.0) *
                  cell_area);
  return d;
}

}  // namespace

SpectralDensity trig_poly_square_density(const FourierTable& table) {
  const int n = table.truncation();
  auto coeffs = std::make_shared<FourierTable>(table);
  // symmetrize so the polynomial is real
  for (int k = -n; k <= n; ++k)
    for (int l = -n; l <= n; ++l) {
      double avg = 0.5 * (table.at(k, l) + table.at(-k, -l));
      coeffs->at(k, l) = avg;
    }
  SpectralDensity d("trig_poly_sq", [coeffs, n](double x, double y) {
    double g = 0.0;
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l)
        g += coeffs->at(k, l) * std::cos(k * x + l * y);
    g /= kTwoPi;
    return g * g;
  });
  d.set_closed_l1(coeffs->sum_squares());
  return d;
}

SpectralDensity make_density(const std::string& name,
                             const nlohmann::json& params) {
  if (name == "constant") return make_constant(params);
  if (name == "box_indicator") return make_box(params);
  if (name == "inv_sqrt_xy") return make_inv_sqrt_xy(params);
  if (name == "shifted_1d") return make_shifted_1d(params);
  if (name == "grid") return make_grid(params);
  if (name == "trig_poly_sq") {
    int n = params.value("n", 1);
    if (n < 0 || n > 32) throw ConfigError("trig_poly_sq: n out of range");
    auto coeffs = params.at("coeffs").get<std::vector<double>>();
    int w = 2 * n + 1;
    if (coeffs.size() != static_cast<std::size_t>(w) * w)
      throw ConfigError("trig_poly_sq: coeffs must have (2n+1)^2 entries");
    FourierTable t(n);
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l)
        t.at(k, l) = coeffs[static_cast<std::size_t>(k + n) * w + (l + n)];
    return trig_poly_square_density(t);
  }
  throw ConfigError("unknown density '" + name + "'");
}

AtomSet make_atoms(const nlohmann::json& atoms) {
  std::vector<Atom> out;
  for (const auto& a : atoms) {
    Atom atom;
    atom.x = parse_pi_multiple(a.at("x"), "atom x");
    atom.y = parse_pi_multiple(a.at("y"), "atom y");
    atom.weight = a.at("a").get<double>();
    out.push_back(atom);
  }
  return AtomSet(std::move(out));
}

SpectralMeasure make_measure(const nlohmann::json& spec) {
  std::optional<SpectralDensity> density;
  if (spec.contains("density") && !spec["density"].is_null()) {
    const auto& d = spec["density"];
    density = make_density(d.at("name").get<std::string>(),
                           d.value("params", nlohmann::json::object()));
  }
  AtomSet atoms;
  if (spec.contains("atoms")) atoms = make_atoms(spec["atoms"]);
  return SpectralMeasure(std::move(density), std::move(atoms));
}

}  // namespace specwig
