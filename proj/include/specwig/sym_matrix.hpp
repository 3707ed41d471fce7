#pragma once

#include <cstddef>
#include <vector>

namespace specwig {

// Dense symmetric matrix, full row-major storage so inner loops stay
// contiguous.  Writers go through set_sym, which keeps (i,j) == (j,i) exact.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

  int dim() const { return n_; }
  double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  void set_sym(int i, int j, double v) {
    a_[static_cast<std::size_t>(i) * n_ + j] = v;
    a_[static_cast<std::size_t>(j) * n_ + i] = v;
  }
  const double* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * n_; }
  double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * n_; }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += at(i, i);
    return t;
  }
  double frobenius_sq() const {
    double t = 0.0;
    for (double v : a_) t += v * v;
    return t;
  }
  double max_abs() const {
    double t = 0.0;
    for (double v : a_) t = std::max(t, v < 0 ? -v : v);
    return t;
  }

 private:
  int n_;
  std::vector<double> a_;
};

}  // namespace specwig
