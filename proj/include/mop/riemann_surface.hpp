#pragma once

#include "mop/config.hpp"
#include "mop/numeric.hpp"

#include <array>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace mop {

// Genus-zero three-sheeted surface over Delta_1 = [0, alpha^3] and
// Delta_2 = [-b^3, -a^3] in the tau plane. psi solves
//   w^3 + p(z) w^2 + q(z) w + r = 0,
//   p = 2z/a^3 + 1 + (3 + h + Theta2 - Theta1)/H,
//   q = 4z/(a^3 H) + 2/H + (2 + 2h + Theta2 - 3 Theta1)/H^2,
//   r = -2 Theta1 / H^3,  H = H(beta).
struct SurfaceModel {
  Real alpha3, a3, b3;
  Real lambda, mu;
  Real beta, gamma;
  Real c, d;
  Real h, theta1, theta2, H_beta;
  Real B;         // psi_2(z) = B/z + O(1/z^2)
  Real C_prod;    // psi_0 psi_1 psi_2
  Real psi0_inf;  // psi_0(infinity) = -2/H
  Real residual1, residual2;  // |equations| at (beta, gamma)
};

// The four recurrence limits the Riemann-surface formulas need.
struct ALimits {
  Real a0, a1, a3, a4;
};

struct BoundaryLaw {
  int family = 1;  // 1: F1 laws on (0, alpha^3), 2: F2 laws on (-b^3, -a^3)
  int l = 0;
  Real constant;        // mean of the sampled values, 1/omega_family^(l)
  Real max_rel_dev;     // max |v/constant - 1|
  Real rel_variance;    // variance of v/constant
  std::vector<Real> tau;
  std::vector<Real> values;  // two per tau: from above, then from below
};

// Returns the unique (beta, gamma) with -1 < gamma < beta < 1 solving
//   2(b+g)(3-bg-b-g)(3-bg+b+g) + (lambda-mu)(b-g)^3 = 0,
//   (lambda+mu)^2 (b-g)^6 = 4(3+bg)^3 (1-bg)(2+b+g)(2-b-g).
// Multistart damped Newton on a 16x16 grid, then polish at working precision.
std::pair<Real, Real> solve_beta_gamma(const Real& lambda, const Real& mu);
std::array<Real, 2> beta_gamma_residuals(const Real& lambda, const Real& mu, const Real& beta, const Real& gamma);

class RiemannSurface {
 public:
  explicit RiemannSurface(const StarConfig& cfg);

  const SurfaceModel& model() const { return m_; }

  // Cubic coefficients p(z), q(z); r is constant.
  std::pair<Cx, Cx> pq(const Cx& z) const;
  // |w^3 + p w^2 + q w + r| divided by the largest term magnitude.
  Real cubic_residual(const Cx& z, const Cx& w) const;

  // (psi_0, psi_1, psi_2) at z. Labels come from asymptotic matching far out
  // and continuation along a path that never crosses the cuts.
  // Throws NumericalError near a branch point, on a cut, or when two roots
  // coincide to 1e-20.
  std::array<Cx, 3> eval_branches(const Cx& z) const;
  // Branches divided by their leading Laurent coefficients -2/H, -2/a^3, B;
  // their product is identically 1.
  std::array<Cx, 3> normalized_branches(const Cx& z) const;

  // a^(0) - a^(3) = a^(4) - a^(1) = -a^3 Theta2 / (4 H(beta)).
  Real delta_a() const;
  // a^(3)/a^(0) is the double root of the cubic at the branch point z = 0,
  // rescaled by psi_0(infinity); a^(1)/a^(4) is the simple root there. With
  // delta_a this fixes all four limits.
  ALimits closed_form_limits() const;

  // omega_1^(l) expressed through the limits a^(i).
  static std::array<Real, 6> omega1(const ALimits& a);

  // Closed-form F~_family^(i)(z). Throws NumericalError if a denominator
  // vanishes.
  Cx limiting_F(int i, int family, const Cx& z, const ALimits& a) const;

  // Samples one of the twelve boundary-value laws at `points` interior tau
  // values, approaching the cut at distance eps from both sides.
  BoundaryLaw boundary_law(int family, int l, const ALimits& a, int points = 20, double eps = 1e-8) const;

  // Deterministic low-discrepancy points in a box around both cuts, kept at
  // least `margin` away from them.
  std::vector<Cx> sample_points(int count, double margin = 1e-2) const;

  Real z_ref() const { return m_.alpha3 + m_.b3 + 10; }

 private:
  std::array<std::complex<double>, 3> track(const Cx& z) const;
  void check_admissible(const Cx& z) const;

  SurfaceModel m_;
  double p1_, p0_, q1_, q0_, r_;  // double copies: p = p1 z + p0, q = q1 z + q0
  int bits_;
};

}  // namespace mop
