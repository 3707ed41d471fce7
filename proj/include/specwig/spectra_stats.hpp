#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "specwig/eig.hpp"

namespace specwig {

// Empirical spectral distribution: eigenvalues of W/sqrt(N), weight 1/N each.
struct ESD {
  std::vector<double> sample;  // ascending
  int n_matrix = 0;
};

// Point measure with an implicit infinite mass at zero: the non-zero atoms
// split into a non-increasing positive sequence and a non-decreasing negative
// one, the ordering the l^p-style metric compares positionally.
struct PointMeasure {
  std::vector<double> pos;  // descending, > 0
  std::vector<double> neg;  // ascending, < 0
};

ESD esd_from_spectrum(const EigenSpectrum& s, int N);

// Eigen measure of A/N; entries below zero_tol join the implicit zero mass.
// Default tolerance scales with the spectrum magnitude.
PointMeasure em_from_spectrum(const EigenSpectrum& s, int N,
                              double zero_tol = -1.0);

PointMeasure point_measure_from_values(const std::vector<double>& values,
                                       double zero_tol = 0.0);

// d_p for even p in {2, 4}: positional l^p gap between the ordered sequences.
double dp_distance(const PointMeasure& a, const PointMeasure& b, int p);

// integral of |x|^p against the point measure (zero mass contributes nothing)
double abs_moment(const PointMeasure& m, int p);

double empirical_moment(const ESD& e, int k);

// sup_x |empirical cdf - cdf|, evaluated at the sample points.
double ks_distance(const ESD& e, const std::function<double(double)>& cdf);

// CDF of the semicircle law with variance gamma (support |x| <= 2 sqrt(gamma)).
std::function<double(double)> wsl_cdf(double gamma);

// {N, scaling, moments[1..8], ks} summary used by the experiment reports.
nlohmann::json esd_summary_json(const ESD& e, const std::string& scaling,
                                double ks);

// non-zero atoms in ascending order (the implicit zeros are not written)
std::vector<double> point_measure_values(const PointMeasure& m);

void write_values_csv(const std::string& path,
                      const std::vector<double>& values,
                      const std::string& header = "lambda");

}  // namespace specwig
