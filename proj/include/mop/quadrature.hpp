#pragma once

#include "mop/numeric.hpp"

#include <vector>

namespace mop {

struct QuadRule {
  std::vector<Real> x;
  std::vector<Real> w;
};

// n-point Gauss rule for (1-x)^a (1+x)^b on [-1,1], a, b > -1. Nodes ascending.
// Double-precision Golub-Welsch seeds, Newton-refined on the orthonormal
// recurrence at the current precision; weights are inverse Christoffel sums.
QuadRule gauss_jacobi(int n, const Real& a, const Real& b);

}  // namespace mop
