#pragma once

#include <cstdint>
#include <vector>

#include "specwig/spectral_measure.hpp"
#include "specwig/sym_matrix.hpp"

namespace specwig {

struct FieldSamplerConfig {
  SpectralMeasure measure;
  int truncation_n = 16;  // moving-average window and atom cutoff
  std::uint64_t seed = 0;
};

// N x N sample of the stationary field; value(i,j) uses 1-based lattice
// indices internally so the trigonometric columns line up with the Cesaro
// limits used downstream.
struct GaussianField {
  int n = 0;
  std::vector<double> values;
  std::uint64_t seed = 0;
  int truncation_n = 0;

  double at(int i, int j) const {
    return values[static_cast<std::size_t>(i) * n + j];
  }
  double& at(int i, int j) {
    return values[static_cast<std::size_t>(i) * n + j];
  }
};

// Gaussian amplitudes attached to the atoms: pair (V1, V2) per atom, drawn
// from the "V" substream of the seed.  Exposed so the finite-dimensional
// limit construction can reuse the exact same draws.
struct VDraws {
  std::vector<std::pair<double, double>> v;
};

VDraws draw_v(std::uint64_t seed, int count);

// Moving-average part: innovations on the enlarged window from the "U"
// substream, convolved with the sqrt-density coefficient table.
GaussianField sample_ac_field(const FieldSamplerConfig& cfg, int N);

// Same computation from an explicit coefficient table.
GaussianField ma_field_from_table(const FourierTable& t, std::uint64_t seed,
                                  int N);

// Harmonic part built from the atoms and the V draws.
GaussianField sample_discrete_field(const FieldSamplerConfig& cfg, int N);
GaussianField discrete_field_from_draws(const AtomSet& atoms, const VDraws& v,
                                        int N);

// Full field: moving-average plus harmonic parts, on independent substreams
// of the same seed.
GaussianField sample_field(const FieldSamplerConfig& cfg, int N);

// W(i,j) = X(i,j) + X(j,i)
SymmetricMatrix assemble_wigner(const GaussianField& field);

SymmetricMatrix scale(const SymmetricMatrix& a, double factor);

// debugging dumps, one comma-separated row per line
void write_field_csv(const std::string& path, const GaussianField& field);
void write_matrix_csv(const std::string& path, const SymmetricMatrix& a);

}  // namespace specwig
