#include "specwig/field_sim.hpp"

#include <cmath>
#include <fstream>

#include "specwig/kernels.hpp"
#include "specwig/rng.hpp"

namespace specwig {

namespace {

std::vector<double> innovations(std::uint64_t seed, int rows, int cols) {
  GaussianStream u(seed, "U");
  std::vector<double> grid(static_cast<std::size_t>(rows) * cols);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = u.normal(i);
  return grid;
}

}  // namespace

VDraws draw_v(std::uint64_t seed, int count) {
  GaussianStream v(seed, "V");
  VDraws out;
  out.v.reserve(count);
  for (int k = 0; k < count; ++k)
    out.v.emplace_back(v.normal(2 * k), v.normal(2 * k + 1));
  return out;
}

GaussianField ma_field_from_table(const FourierTable& t, std::uint64_t seed,
                                  int N) {
  if (N < 1) throw ConfigError("field size must be >= 1");
  const int n = t.truncation();
  const int w = N + 2 * n;  // innovation window per axis

  GaussianField field;
  field.n = N;
  field.seed = seed;
  field.truncation_n = n;
  field.values.assign(static_cast<std::size_t>(N) * N, 0.0);

  const double top = t.max_abs();
  if (top == 0.0) return field;

  std::vector<double> u = innovations(seed, w, w);
  auto urow = [&](int r) { return u.data() + static_cast<std::size_t>(r) * w; };
  const double skip = 1e-14 * top;

  if (auto f = t.factor_rank1()) {
    // Separable table: column pass then row pass.
    const auto& rho = f->first;
    const auto& sig = f->second;
    std::vector<double> tmp(static_cast<std::size_t>(w) * N, 0.0);
    auto trow = [&](int r) {
      return tmp.data() + static_cast<std::size_t>(r) * N;
    };
    for (int a = 0; a < w; ++a)
      for (int l = -n; l <= n; ++l) {
        double c = sig[l + n];
        if (std::abs(c) <= skip) continue;
        kernels::axpy(c, urow(a) + (n - l), trow(a), N);
      }
    for (int i = 0; i < N; ++i)
      for (int k = -n; k <= n; ++k) {
        double c = rho[k + n];
        if (std::abs(c) <= skip) continue;
        kernels::axpy(c, trow(i + n - k), &field.at(i, 0), N);
      }
    return field;
  }

  for (int i = 0; i < N; ++i) {
    double* out = &field.at(i, 0);
    for (int k = -n; k <= n; ++k) {
      const double* src = urow(i + n - k);
      for (int l = -n; l <= n; ++l) {
        double c = t.at(k, l);
        if (std::abs(c) <= skip) continue;
        kernels::axpy(c, src + (n - l), out, N);
      }
    }
  }
  return field;
}

GaussianField sample_ac_field(const FieldSamplerConfig& cfg, int N) {
  if (!cfg.measure.ac())
    throw ConfigError("sample_ac_field needs a density component");
  FourierTable t = sqrt_density_coeffs(*cfg.measure.ac(), cfg.truncation_n);
  return ma_field_from_table(t, cfg.seed, N);
}

GaussianField discrete_field_from_draws(const AtomSet& atoms, const VDraws& v,
                                        int N) {
  if (N < 1) throw ConfigError("field size must be >= 1");
  GaussianField field;
  field.n = N;
  field.values.assign(static_cast<std::size_t>(N) * N, 0.0);

  const std::size_t count = std::min(atoms.size(), v.v.size());
  for (std::size_t k = 0; k < count; ++k) {
    const Atom& a = atoms.atoms()[k];
    if (a.weight == 0.0) continue;
    const double amp = std::sqrt(a.weight);
    const double v1 = v.v[k].first, v2 = v.v[k].second;
    const double cy = std::cos(a.y), sy = std::sin(a.y);
    for (int i = 0; i < N; ++i) {
      // phase (i+1)*x + (j+1)*y advanced by rotation along the row
      double c = std::cos((i + 1) * a.x + a.y);
      double s = std::sin((i + 1) * a.x + a.y);
      double* out = &field.at(i, 0);
      for (int j = 0; j < N; ++j) {
        out[j] += amp * (v1 * c + v2 * s);
        double cn = c * cy - s * sy;
        s = s * cy + c * sy;
        c = cn;
      }
    }
  }
  return field;
}

GaussianField sample_discrete_field(const FieldSamplerConfig& cfg, int N) {
  const AtomSet& atoms = cfg.measure.atoms();
  int count = std::min<int>(cfg.truncation_n, static_cast<int>(atoms.size()));
  GaussianField field =
      discrete_field_from_draws(atoms, draw_v(cfg.seed, count), N);
  field.seed = cfg.seed;
  field.truncation_n = cfg.truncation_n;
  return field;
}

GaussianField sample_field(const FieldSamplerConfig& cfg, int N) {
  if (cfg.measure.ac()) {
    GaussianField y = sample_ac_field(cfg, N);
    if (!cfg.measure.atoms().empty()) {
      GaussianField z = sample_discrete_field(cfg, N);
      for (std::size_t i = 0; i < y.values.size(); ++i)
        y.values[i] += z.values[i];
    }
    return y;
  }
  return sample_discrete_field(cfg, N);
}

SymmetricMatrix assemble_wigner(const GaussianField& field) {
  const int n = field.n;
  SymmetricMatrix w(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      w.set_sym(i, j, field.at(i, j) + field.at(j, i));
  return w;
}

SymmetricMatrix scale(const SymmetricMatrix& a, double factor) {
  const int n = a.dim();
  SymmetricMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.set_sym(i, j, a.at(i, j) * factor);
  return out;
}

namespace {

void write_rows_csv(const std::string& path, int n,
                    const std::function<double(int, int)>& value) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out.precision(17);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out << (j ? "," : "") << value(i, j);
    out << "\n";
  }
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

}  // namespace

void write_field_csv(const std::string& path, const GaussianField& field) {
  write_rows_csv(path, field.n,
                 [&](int i, int j) { return field.at(i, j); });
}

void write_matrix_csv(const std::string& path, const SymmetricMatrix& a) {
  write_rows_csv(path, a.dim(), [&](int i, int j) { return a.at(i, j); });
}

}  // namespace specwig
