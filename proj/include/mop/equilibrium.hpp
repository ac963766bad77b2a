#pragma once

#include "mop/config.hpp"
#include "mop/riemann_surface.hpp"

#include <complex>
#include <string>
#include <vector>

namespace mop {

// Probability measure on [lo, hi]. With cell edges it is a piecewise-constant
// density (mass weights[i] spread over [edges[i], edges[i+1]]); without edges
// it is a sum of atoms at the nodes. Double precision throughout: the
// discretization error dominates long before roundoff does.
struct DiscreteMeasure {
  double lo = 0, hi = 0;
  std::vector<double> edges;    // N + 1 Chebyshev-distributed cell edges, or empty
  std::vector<double> nodes;    // cell midpoints, or atom positions
  std::vector<double> weights;  // nonnegative, summing to 1

  double mass() const;
  double cdf(double x) const;
  // [first, last] cell edge carrying weight above `threshold` times the max weight.
  std::pair<double, double> support(double threshold = 1e-10) const;
};

// N cells on [lo, hi] with edges lo + (hi - lo)(1 - cos(pi k/N))/2 and uniform weights.
DiscreteMeasure chebyshev_cells(double lo, double hi, int N);

// V^mu(z) = int log(1/|z - t|) dmu(t). Cell densities are integrated exactly;
// atoms throw std::domain_error when z hits one.
double potential(const DiscreteMeasure& mu, std::complex<double> z);

struct EquilibriumSolution {
  DiscreteMeasure mu1;  // on Delta_1 = [0, alpha^3]
  DiscreteMeasure mu2;  // on Delta_2 = [-b^3, -a^3]
  double omega1 = 0, omega2 = 0;
  // Combined potentials at the nodes and their offsets from omega_j.
  std::vector<double> W1, W2;
  double support_residual1 = 0, support_residual2 = 0;  // max |W_j - omega_j| on the support
  double offsupport_gap1 = 0, offsupport_gap2 = 0;      // min (W_j - omega_j) off the support (0 if none)
  std::vector<double> energy_trace;  // one entry per accepted iterate, both phases
  int pg_iterations = 0;
  int active_set_iterations = 0;
  double energy = 0;
};

// Interaction matrix [[1, -1/4], [-1/4, 1/4]] on (Delta_1, Delta_2).
// Projected gradient warm start, then an active-set solve of the KKT system.
// Throws NumericalError if the active-set phase does not settle. `start`, if
// given, holds 2N nonnegative weights (Delta_1 cells first); each half is
// projected onto the simplex before the first step.
EquilibriumSolution solve_equilibrium(double alpha3, double a3, double b3, int N,
                                      const std::vector<double>& start = {});
EquilibriumSolution solve_equilibrium(const StarConfig& cfg, int N);

struct PotentialIdentity {
  std::complex<double> z;
  double residual1 = 0;  // V^{mu1}(z) + (1/2) sum_i log|F~_1^(i)(z)|
  double residual2 = 0;  // V^{mu2}(z) + sum_i log|F~_2^(i)(z)|
};

std::vector<PotentialIdentity> check_potential_ratio_identity(const RiemannSurface& surf, const ALimits& a,
                                                              const EquilibriumSolution& sol,
                                                              const std::vector<Cx>& points);

}  // namespace mop
