#pragma once

#include "mop/mop_core.hpp"

#include <string>
#include <vector>

namespace mop {

struct SecondKindRecord {
  int n = 0;
  Poly P2;                  // monic in tau, zeros of Phi_n on (-b^3, -a^3)
  std::vector<Real> roots;  // ascending
  Real K;                   // K_n
  Real K2;                  // K_{n,2}
  Real kappa;               // K_n
  Real kappa2;              // K_{n,2} / K_n
  int grid_points = 0;      // grid size that produced the expected count
};

// Expected number of real zeros of Phi_n on (-b^3, -a^3).
int expected_P2_degree(int n);

struct SignLawReport {
  int n = 0;
  bool ok = true;
  std::vector<Real> sample_t;  // points in (-b, -a)
  std::vector<int> sign;       // sign of Psi_n / Q_{n,2}
  int expected = 0;
};

// Second-type functions in reduced form. With r = n mod 3,
//   Phi_n(w) = int_0^{alpha^3} Q_n(cbrt tau) s1(cbrt tau) j_r(tau) / (tau - w) dtau,
// j_r = tau^{-2/3}, 1, tau^{-1/3}, and Psi_n(z) = z^{e_r} Phi_n(z^3), e_r = 2, 0, 1.
class SecondKind {
 public:
  // Builds records for 0 <= n <= sys.n_max() + 1, matching the P_n range.
  explicit SecondKind(const MopSystem& sys);

  const MopSystem& system() const { return sys_; }
  int n_max() const { return static_cast<int>(rec_.size()) - 1; }  // largest index with a record

  Real Phi(int n, const Real& w) const;
  Cx Phi(int n, const Cx& w) const;
  Real Psi(int n, const Real& t) const;
  Cx Psi(int n, const Cx& z) const;

  const SecondKindRecord& record(int n) const;
  // Grid-and-bisect zero search on (-b^3, -a^3) with `grid` sample points.
  // Retries with a 4x finer grid before reporting a count mismatch.
  SecondKindRecord find_P2(int n) const;

  // h_n = K_n^2 H_n, evaluated through the varying-measure Cauchy transform.
  Cx h(int n, const Cx& z) const;
  Real H_abs(int n, const Real& t) const;  // |H_n(t)| for t in (-b, -a)
  // -z^{e'} / sqrt((z^3 - alpha^3) z^3), e' = 2, 1, 3; the square root is the
  // branch analytic off [0, alpha^3] and positive on (alpha^3, inf).
  Cx h_limit(int n, const Cx& z) const;

  // Relative residuals of the reduced orthogonality of Psi_n on (-b, -a).
  Real psi_orthogonality_residual(int n) const;
  // Relative residuals of the orthogonality of P_n against nu_n and of P_{n,2}
  // against nu_{n,2}.
  Real varying_orthogonality_residual(int n) const;
  Real varying_orthogonality_residual_2(int n) const;

  SignLawReport sign_law(int n, int samples = 5) const;
  // Zeros of Phi_n and Phi_{n+1} on (-b^3, -a^3).
  InterlacingReport check_interlacing(int n) const;

 private:
  SecondKindRecord build(int n);
  void check_pole(const Cx& w) const;
  Real norm_weight(int n, size_t q) const;  // dnu_n at t-node q, without P2
  // H_n = h_n / K_n^2 = z^{e'} sum_q v[q] / (tau_q - z^3), v = dnu_n P_n^2 at the nodes.
  Real H_real(int n, const Real& t, const std::vector<Real>& v) const;
  Cx H_cx(int n, const Cx& z, const std::vector<Real>& v) const;

  const MopSystem& sys_;
  const Weights& w_;
  // c_[n][q]: Phi_n(w) = sum_q c_[n][q] / (tau_q - w).
  std::vector<std::vector<Real>> c_;
  std::vector<std::vector<Real>> hv_;
  std::vector<SecondKindRecord> rec_;
};

}  // namespace mop
