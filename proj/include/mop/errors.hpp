#pragma once

#include <stdexcept>

namespace mop {

// Iteration or quadrature failed to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A proven structural property failed numerically (degree, simplicity,
// positivity, zero count). Never silently repaired.
class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mop
