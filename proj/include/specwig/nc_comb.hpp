#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "specwig/spectral_measure.hpp"

namespace specwig {

// Non-crossing pair partition of {1..2m}; pairs (u,v) with u < v, listed in
// increasing u.
struct PairPartition {
  int m = 0;
  std::vector<std::pair<int, int>> pairs;
};

// Kreweras complement: m+1 blocks covering {1..2m}, ordered by their maximal
// element; t_map[i-1] is the 1-based block index holding i.
struct KrewerasBlocks {
  std::vector<std::vector<int>> blocks;
  std::vector<int> t_map;
};

std::uint64_t catalan(int m);

// All non-crossing pair partitions, deterministic order; 1 <= m <= 6.
std::vector<PairPartition> enumerate_nc2(int m);

KrewerasBlocks kreweras(const PairPartition& p);

// Visits every k in [-bound, bound]^{2m} whose coordinate sum vanishes on
// each Kreweras block; per block all but the last coordinate are free and the
// last is solved, out-of-range solutions discarded.
void enumerate_s_tuples(const PairPartition& p, int bound,
                        const std::function<void(const std::vector<int>&)>& visit);

// 2m-th moment of the truncated-window limit law: lattice sum over pairings
// and block-sum-zero tuples of products of symmetrized autocovariances.
double beta_moment(const FourierTable& t, int m);

// integral over [-pi,pi]^{m+1} of the product over pairs (u,v) of
// f(x_{T(u)}, -x_{T(v)}) + f(-x_{T(v)}, x_{T(u)}); bounded densities only.
double l_sigma_integral(const SpectralDensity& f, const PairPartition& p);

// (2pi)^{m-1} * sum over pairings of l_sigma_integral.
double partition_integral_moment(const SpectralDensity& f, int m);

}  // namespace specwig
