#include "specwig/free_prob.hpp"

#include <cmath>

#include "specwig/errors.hpp"
#include "specwig/nc_comb.hpp"

namespace specwig {

double MomentSequence::at(int k) const {
  if (k < 1 || k > static_cast<int>(moments.size()))
    throw ConfigError("moment of order " + std::to_string(k) +
                      " not available");
  return moments[k - 1];
}

MomentSequence wsl_moments(double gamma, int K) {
  if (!(gamma > 0.0)) throw ConfigError("semicircle variance must be positive");
  if (K < 1 || K > 8) throw ConfigError("moment order K must be in [1, 8]");
  MomentSequence seq;
  seq.moments.assign(K, 0.0);
  for (int k = 2; k <= K; k += 2)
    seq.moments[k - 1] =
        static_cast<double>(catalan(k / 2)) * std::pow(gamma, k / 2);
  return seq;
}

namespace {

double eta_quadrature(const std::function<double(double)>& r, int k,
                      int cells) {
  const double h = 2.0 * kPi / cells;
  const double scale = 2.0 * std::sqrt(2.0) * kPi;
  double acc = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double x = -kPi + (i + 0.5) * h;
    acc += std::pow(scale * r(x), k);
  }
  return acc * h / (2.0 * kPi);
}

}  // namespace

MomentSequence eta_moments(const std::function<double(double)>& r, int K) {
  if (K < 1 || K > 8) throw ConfigError("moment order K must be in [1, 8]");
  MomentSequence seq;
  seq.moments.reserve(K);
  for (int k = 1; k <= K; ++k) {
    double i1 = eta_quadrature(r, k, 2048);
    double i2 = eta_quadrature(r, k, 4096);
    double i3 = eta_quadrature(r, k, 8192);
    double i4 = eta_quadrature(r, k, 16384);
    if (!std::isfinite(i4) || std::abs(i4) > 1e12)
      throw DivergentMomentError(k);
    double d2 = std::abs(i3 - i2);
    double d3 = std::abs(i4 - i3);
    bool settled = d3 <= std::max(1e-10, 1e-8 * std::abs(i4));
    // geometric decay of the refinement deltas; a flat sequence of deltas is
    // the signature of a log-divergent integrand
    bool decaying = d3 <= 0.85 * d2 + 1e-12;
    if (!settled && !decaying) throw DivergentMomentError(k);
    (void)i1;
    seq.moments.push_back(i4);
  }
  return seq;
}

double free_mult_semicircle(const MomentSequence& eta, int m) {
  if (m < 1 || m > 3) throw ConfigError("free_mult_semicircle supports m <= 3");
  double total = 0.0;
  for (const PairPartition& sigma : enumerate_nc2(m)) {
    double prod = 1.0;
    for (const auto& block : kreweras(sigma).blocks)
      prod *= eta.at(static_cast<int>(block.size()));
    total += prod;
  }
  return total;
}

double product_law_bw_moments(int m) {
  if (m < 1) throw ConfigError("moment order must be >= 1");
  return std::pow(2.0 * kPi, 2 * m) * 0.5 * static_cast<double>(catalan(m));
}

}  // namespace specwig
