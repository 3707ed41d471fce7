#pragma once

#include <functional>
#include <vector>

namespace specwig {

struct MomentSequence {
  std::vector<double> moments;  // moments[k-1] is the k-th moment
  double at(int k) const;       // throws when the order is missing
};

// Semicircle law with variance gamma: even moments Catalan(m) * gamma^m.
MomentSequence wsl_moments(double gamma, int K);

// Moments of the law of 2^{3/2} pi r(U), U uniform on (-pi, pi), by
// quadrature with refinement; throws DivergentMomentError when an order
// fails to settle (or exceeds 1e12).
MomentSequence eta_moments(const std::function<double(double)>& r, int K);

// 2m-th moment of eta boxtimes WSL(1): sum over non-crossing pairings of the
// product of eta-moments at the Kreweras block sizes.
double free_mult_semicircle(const MomentSequence& eta, int m);

// 2m-th moment of the law of 2 pi B W, B Bernoulli(1/2), W semicircle(1).
double product_law_bw_moments(int m);

}  // namespace specwig
