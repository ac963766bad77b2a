#pragma once

#include "mop/numeric.hpp"

#include <vector>

namespace mop {

// Coefficients in increasing degree order.
using Poly = std::vector<Real>;

Real eval(const Poly& p, const Real& x);
Cx eval(const Poly& p, const Cx& z);
Poly derivative(const Poly& p);
// Monic polynomial with the given roots.
Poly from_roots(const std::vector<Real>& roots);

struct RootResult {
  std::vector<Real> roots;  // ascending
  Real max_imag;            // largest |Im| before projection onto the real line
  Real min_gap;             // smallest gap between consecutive roots
};

// Roots of a polynomial known to have only real simple roots. Seeds are the
// eigenvalues of the balanced companion matrix in double precision; they are
// refined simultaneously (Aberth) at the current precision and then
// Newton-polished on the real line.
RootResult real_roots(const Poly& p);

}  // namespace mop
