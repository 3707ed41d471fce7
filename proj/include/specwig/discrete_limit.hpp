#pragma once

#include <cstdint>
#include <vector>

#include "specwig/field_sim.hpp"
#include "specwig/spectra_stats.hpp"
#include "specwig/sym_matrix.hpp"

namespace specwig {

enum class Trig { cos, sin };

// One rank-2 term Y * (u v^T + v u^T) with trigonometric columns
// u(i) = trig(i * u_freq), v(j) = trig(j * v_freq).
struct HarmonicTerm {
  double amplitude = 0.0;  // signed Gaussian weight Y
  Trig u_kind = Trig::cos;
  double u_freq = 0.0;
  Trig v_kind = Trig::cos;
  double v_freq = 0.0;
};

// Factorization of the symmetrized harmonic field: four terms per atom, so
// that sum_k Y_k [u_k(i) v_k(j) + v_k(i) u_k(j)] reproduces Z(i,j) + Z(j,i).
struct HarmonicFactorization {
  std::vector<HarmonicTerm> terms;
};

// Limit of (1/N) B^T B for the column matrix built from the factorization.
struct GramLimit {
  int dim = 0;
  std::vector<double> c;  // dim x dim, row-major, symmetric PSD
  double at(int i, int j) const {
    return c[static_cast<std::size_t>(i) * dim + j];
  }
};

HarmonicFactorization harmonic_factorization(const AtomSet& atoms,
                                             const VDraws& v, int n);

// lim (1/N) sum_{k=1..N} trig_a(k wa) trig_b(k wb); resonance decided after
// range reduction mod 2 pi with tolerance 1e-12.
double cesaro_limit(Trig a, double wa, Trig b, double wb);

GramLimit gram_limit(const HarmonicFactorization& h);

// Symmetric PSD square root via a local Jacobi eigendecomposition; negative
// eigenvalues above -clamp_tol are clamped to zero, below it is an error.
SymmetricMatrix sym_sqrt_psd(const SymmetricMatrix& c, double clamp_tol = 1e-10);

// Eigen measure of C^{1/2} P C^{1/2} for the given draws: the fixed-n
// approximation of the limiting eigen measure.
PointMeasure xi_from_draws(const AtomSet& atoms, const VDraws& v, int n);

// Draws the V amplitudes from the "V" substream of seed (the same stream the
// harmonic field sampler uses, which is what couples the two).
PointMeasure sample_xi(const AtomSet& atoms, int n, std::uint64_t seed);

// Sample of integral x^2 d xi over independent trials.
std::vector<double> xi_second_moment_stat(const AtomSet& atoms, int n,
                                          int trials, std::uint64_t seed);

}  // namespace specwig
