#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

// Counter-based Gaussian stream.  A stream is identified by (seed, tag, index)
// and every variate is addressed by an explicit counter, so independent
// substreams ("U" for the moving-average innovations, "V" for the harmonic
// amplitudes, one index per Monte Carlo trial) can be replayed exactly from
// any call site.  This is what makes the coupled experiments possible: the
// same (seed, trial) always yields the same V draws regardless of the matrix
// size being simulated.

namespace specwig {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t derive_trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(splitmix64(seed) ^ (trial + 0x9e3779b97f4a7c15ULL));
}

class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0)
      : key_(splitmix64(splitmix64(seed ^ fnv1a64(tag)) +
                        index * 0x9e3779b97f4a7c15ULL)) {}

  // Uniform in the open interval (0, 1).
  double uniform(std::uint64_t counter) const {
    std::uint64_t h = splitmix64(key_ + counter * 0x9e3779b97f4a7c15ULL);
    return (static_cast<double>(h >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal via the Box-Muller cosine branch.
  double normal(std::uint64_t counter) const {
    double u1 = uniform(2 * counter);
    double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

}  // namespace specwig
