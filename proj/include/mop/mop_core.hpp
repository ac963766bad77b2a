#pragma once

#include "mop/poly.hpp"
#include "mop/weights.hpp"

#include <string>
#include <vector>

namespace mop {

// One retained orthogonality condition: int tau^j P_n(tau) w(tau) dtau = 0 with
// w = A (s1 family) or Af (f*s1 family).
struct Condition {
  WeightId family;
  int j;
};

// Conditions surviving the three-fold rotation for index n. Exactly floor(n/3)
// of them; throws std::logic_error otherwise.
std::vector<Condition> defining_conditions(int n);

// Q_n(z) = z^r P_n(z^3), r = n mod 3, P_n monic of degree floor(n/3).
struct ReducedPoly {
  int n = 0;
  int r = 0;
  Poly coeffs;
  std::vector<Real> roots;  // ascending, inside (0, alpha^3)
  Real condition_residual;  // max relative residual of the defining conditions
  Real root_min_gap;
  Real root_max_imag;
};

struct RecurrenceEntry {
  int n = 0;
  Real a;                // coefficient route
  Real a_integral;       // ratio-of-integrals route
  Real route_disagreement;  // relative
  Real residual;         // max-norm of the reduced recurrence on coefficients
};

struct InterlacingReport {
  int n = 0;  // compares n with n + 1
  bool strict = true;    // alternation, no common zeros
  bool directed = true;  // expected member first
  std::vector<std::string> violations;
  bool ok() const { return strict && directed; }
};

// Alternation test shared by the P_n and Phi_n zero sets. first_expected:
// 0 = x first, 1 = y first, -1 = no requirement.
InterlacingReport check_alternation(const std::vector<Real>& x, const std::vector<Real>& y, int first_expected);

class MopSystem {
 public:
  // Computes P_0 .. P_{n_max+1} and a_2 .. a_{n_max}.
  MopSystem(const Weights& weights, int n_max);

  const Weights& weights() const { return w_; }
  int n_max() const { return n_max_; }
  const ReducedPoly& P(int n) const;
  Cx eval_Q(int n, const Cx& z) const;
  Real eval_Q(int n, const Real& t) const;

  const RecurrenceEntry& recurrence(int n) const;  // 2 <= n <= n_max
  Real a(int n) const { return recurrence(n).a; }

  // Zeros of P_n and P_{n+1} on (0, alpha^3) in the directed order.
  InterlacingReport check_interlacing(int n) const;

  Real max_recurrence_residual() const;
  Real max_route_disagreement() const;
  Real max_condition_residual() const;

 private:
  void build_basis(int lmax);
  // Monomial coefficients of P_n at hi_bits_.
  std::vector<Real> legendre_solve(int n, int d, const std::vector<Condition>& conds) const;
  ReducedPoly solve(int n) const;
  Real integral_s1(int n, int m) const;
  Real integral_f(int n, int m) const;

  const Weights& w_;
  int n_max_;
  int bits_;
  // The linear solves and the basis change run with guard bits; the monomial
  // coefficients of shifted Legendre polynomials grow geometrically with degree.
  int hi_bits_;
  std::vector<Real> hi_w_, hi_tau_, hi_g_;
  // Shifted Legendre basis on [0, alpha^3] at hi_bits_: values at the tau nodes
  // and monomial coefficients.
  std::vector<std::vector<Real>> leg_at_nodes_;
  std::vector<Poly> leg_coeffs_;
  std::vector<ReducedPoly> polys_;
  std::vector<RecurrenceEntry> rec_;
};

}  // namespace mop
