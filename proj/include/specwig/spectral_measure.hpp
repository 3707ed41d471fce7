#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "specwig/errors.hpp"

namespace specwig {

inline constexpr double kPi = 3.14159265358979323846;

// Density component of the spectral measure: a non-negative even function on
// [-pi,pi]^2.  Structure hints let the integrators use exact 1-d reductions
// for the registered separable and shifted forms, including closed-form cell
// masses around integrable singularities.
class SpectralDensity {
 public:
  using Eval2D = std::function<double(double, double)>;
  using Eval1D = std::function<double(double)>;
  // Exact integral of the underlying 1-d factor over [a, b].
  using Mass1D = std::function<double(double, double)>;

  struct Separable {
    Eval1D fx, fy;              // f(x,y) = fx(x) * fy(y)
    Eval1D sfx, sfy;            // sqrt factors, sfx*sfy = sqrt(f)
    Mass1D fx_mass, fy_mass;    // optional closed-form cell masses
    Mass1D sfx_mass, sfy_mass;
  };
  struct DiagShift {
    Eval1D g;        // f(x,y) = g(x+y), g 2pi-periodic and even
    Eval1D sqrt_g;
    Mass1D g_mass;       // optional closed forms over [a,b] within (-pi,pi]
    Mass1D sqrt_g_mass;
  };

  SpectralDensity(std::string name, Eval2D eval, int grid_resolution = 256);

  double operator()(double x, double y) const { return eval_(x, y); }
  const std::string& name() const { return name_; }
  int grid_resolution() const { return grid_resolution_; }

  const std::optional<Separable>& separable() const { return separable_; }
  const std::optional<DiagShift>& diag_shift() const { return diag_shift_; }
  std::optional<double> closed_l1() const { return l1_closed_; }

  void set_separable(Separable s) { separable_ = std::move(s); }
  void set_diag_shift(DiagShift d) { diag_shift_ = std::move(d); }
  void set_closed_l1(double v) { l1_closed_ = v; }

  // Samples f on a coarse grid and rejects negativity or broken evenness.
  void validate() const;

 private:
  std::string name_;
  Eval2D eval_;
  int grid_resolution_;
  std::optional<Separable> separable_;
  std::optional<DiagShift> diag_shift_;
  std::optional<double> l1_closed_;
};

struct Atom {
  double x = 0.0;  // radians in (-pi, pi]
  double y = 0.0;
  double weight = 0.0;
};

// Atoms are stored in the symmetrized convention: each entry stands for the
// pair of point masses (w/2) at (x,y) and at (-x,-y) (with pi fixed), so the
// covariance contribution is w*cos(u*x + v*y) with no complex arithmetic.
class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }
  double total_weight() const;

 private:
  std::vector<Atom> atoms_;
};

// Wraps pi * num / den into (-pi, pi] exactly in rational arithmetic before
// converting, so resonances between atom frequencies survive the conversion.
double wrap_rational_pi(long long num, long long den);

class SpectralMeasure {
 public:
  SpectralMeasure(std::optional<SpectralDensity> ac, AtomSet d);

  const std::optional<SpectralDensity>& ac() const { return ac_; }
  const AtomSet& atoms() const { return atoms_; }

 private:
  std::optional<SpectralDensity> ac_;
  AtomSet atoms_;
};

// Truncated table of real Fourier coefficients, indexed by (k,l) in [-n,n]^2.
class FourierTable {
 public:
  explicit FourierTable(int n);

  int truncation() const { return n_; }
  double at(int k, int l) const { return c_[idx(k, l)]; }
  double& at(int k, int l) { return c_[idx(k, l)]; }
  double sum_squares() const;
  double max_abs() const;

  // Rank-1 factorization c[k][l] = rho[k] * sig[l], if the table has one
  // (relative tolerance 1e-10); enables the two-pass moving average.
  std::optional<std::pair<std::vector<double>, std::vector<double>>>
  factor_rank1() const;

 private:
  std::size_t idx(int k, int l) const {
    return static_cast<std::size_t>(k + n_) * (2 * n_ + 1) +
           static_cast<std::size_t>(l + n_);
  }
  int n_;
  std::vector<double> c_;
};

// R(u,v) = integral of exp(i(ux+vy)) against the measure: density quadrature
// plus sum of w_j cos(u x_j + v y_j) over atoms.
double covariance(const SpectralMeasure& m, int u, int v);

// c[k][l] = (2pi)^-1 * integral of exp(-i(kx+ly)) sqrt(f); real by evenness.
FourierTable sqrt_density_coeffs(const SpectralDensity& f, int n);

// Autocovariance of the window-truncated moving average built from t.
double truncated_autocovariance(const FourierTable& t, int u, int v);

double l1_norm(const SpectralDensity& f);

// True iff every windowed lagged row-sum of the coefficient table vanishes:
// sum_{k,l} d[k][l] d[j+k][l] 1(k, l, j+k in A) == 0 for all j != 0 and all
// provided windows A.
bool check_t4_condition(const FourierTable& d,
                        const std::vector<std::vector<int>>& windows);

// Coefficient table of sqrt of the symmetrized density (f(x,y)+f(y,x))/2;
// feeds check_t4_condition.
FourierTable t4_coefficients(const SpectralDensity& f, int n);

// f = g^2 where g is the real trig polynomial with the (symmetrized)
// coefficient table; closed L1 norm is the table's sum of squares.
SpectralDensity trig_poly_square_density(const FourierTable& table);

// ---- registry ----------------------------------------------------------
// Names: "constant", "box_indicator", "inv_sqrt_xy", "shifted_1d",
// "trig_poly_sq", "grid".
SpectralDensity make_density(const std::string& name,
                             const nlohmann::json& params);
AtomSet make_atoms(const nlohmann::json& atoms);
SpectralMeasure make_measure(const nlohmann::json& spec);

}  // namespace specwig
