#include "specwig/spectra_stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "specwig/errors.hpp"
#include "specwig/spectral_measure.hpp"

namespace specwig {

ESD esd_from_spectrum(const EigenSpectrum& s, int N) {
  if (N < 1) throw ConfigError("ESD needs N >= 1");
  ESD e;
  e.n_matrix = N;
  e.sample = s.values;
  const double inv = 1.0 / std::sqrt(static_cast<double>(N));
  for (double& v : e.sample) v *= inv;
  std::sort(e.sample.begin(), e.sample.end());
  return e;
}

PointMeasure point_measure_from_values(const std::vector<double>& values,
                                       double zero_tol) {
  PointMeasure m;
  for (double v : values) {
    if (v > zero_tol)
      m.pos.push_back(v);
    else if (v < -zero_tol)
      m.neg.push_back(v);
  }
  std::sort(m.pos.begin(), m.pos.end(), std::greater<double>());
  std::sort(m.neg.begin(), m.neg.end());
  return m;
}

PointMeasure em_from_spectrum(const EigenSpectrum& s, int N, double zero_tol) {
  if (N < 1) throw ConfigError("eigen measure needs N >= 1");
  std::vector<double> scaled = s.values;
  double top = 0.0;
  for (double& v : scaled) {
    v /= N;
    top = std::max(top, std::abs(v));
  }
  if (zero_tol < 0.0) zero_tol = 1e-12 * N * top;
  return point_measure_from_values(scaled, zero_tol);
}

double dp_distance(const PointMeasure& a, const PointMeasure& b, int p) {
  if (p != 2 && p != 4) throw ConfigError("d_p supports p in {2, 4}");
  auto side = [p](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    const std::size_t n = std::max(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
      double gap = (i < x.size() ? x[i] : 0.0) - (i < y.size() ? y[i] : 0.0);
      double g2 = gap * gap;
      s += p == 2 ? g2 : g2 * g2;
    }
    return s;
  };
  double total = side(a.pos, b.pos) + side(a.neg, b.neg);
  return p == 2 ? std::sqrt(total) : std::sqrt(std::sqrt(total));
}

double abs_moment(const PointMeasure& m, int p) {
  double s = 0.0;
  for (double v : m.pos) s += std::pow(std::abs(v), p);
  for (double v : m.neg) s += std::pow(std::abs(v), p);
  return s;
}

double empirical_moment(const ESD& e, int k) {
  if (e.sample.empty()) return 0.0;
  double s = 0.0;
  for (double v : e.sample) s += std::pow(v, k);
  return s / static_cast<double>(e.sample.size());
}

double ks_distance(const ESD& e, const std::function<double(double)>& cdf) {
  const std::size_t n = e.sample.size();
  if (n == 0) return 0.0;
  double d = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && e.sample[j + 1] == e.sample[i]) ++j;
    double empirical = static_cast<double>(j + 1) / n;
    d = std::max(d, std::abs(empirical - cdf(e.sample[i])));
    i = j + 1;
  }
  return d;
}

std::function<double(double)> wsl_cdf(double gamma) {
  if (!(gamma > 0.0)) throw ConfigError("semicircle variance must be positive");
  const double root = std::sqrt(gamma);
  return [root](double x) {
    double t = x / root;
    if (t <= -2.0) return 0.0;
    if (t >= 2.0) return 1.0;
    return 0.5 + t * std::sqrt(4.0 - t * t) / (4.0 * kPi) +
           std::asin(0.5 * t) / kPi;
  };
}

nlohmann::json esd_summary_json(const ESD& e, const std::string& scaling,
                                double ks) {
  nlohmann::json j;
  j["N"] = e.n_matrix;
  j["scaling"] = scaling;
  nlohmann::json moments = nlohmann::json::array();
  for (int k = 1; k <= 8; ++k) moments.push_back(empirical_moment(e, k));
  j["moments"] = moments;
  j["ks"] = ks;
  return j;
}

std::vector<double> point_measure_values(const PointMeasure& m) {
  std::vector<double> out(m.neg.begin(), m.neg.end());
  out.insert(out.end(), m.pos.rbegin(), m.pos.rend());
  return out;
}

void write_values_csv(const std::string& path,
                      const std::vector<double>& values,
                      const std::string& header) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << header << "\n";
  out.precision(17);
  for (double v : values) out << v << "\n";
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

}  // namespace specwig
