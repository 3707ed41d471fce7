#pragma once

#include <stdexcept>
#include <string>

namespace specwig {

// Numerical integration failed to settle; carries the last refinement residual.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class EvennessError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested moment order does not exist (integral diverges).
class DivergentMomentError : public std::runtime_error {
 public:
  explicit DivergentMomentError(int order)
      : std::runtime_error("moment of order " + std::to_string(order) + " diverges"),
        order_(order) {}
  int order() const { return order_; }

 private:
  int order_;
};

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace specwig
