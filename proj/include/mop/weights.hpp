#pragma once

#include "mop/config.hpp"
#include "mop/quadrature.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <vector>

namespace mop {

// Reduced weights on [0, alpha^3] in tau = t^3:
//   A = s1(cbrt tau) tau^{-2/3}, B = s1(cbrt tau), C = s1(cbrt tau) tau^{2/3},
//   and Af, Bf, Cf carrying the extra factor cbrt(tau) f(cbrt tau) = tau g(tau).
enum class WeightId { A, B, C, Af, Bf, Cf };

const char* weight_name(WeightId id);

struct MomentValue {
  Real value;
  Real error_estimate;
};

// Quadrature and moment service. Every integral over [0, alpha^3] is taken in
// t = cbrt(tau) on (0, alpha), where dtau = 3t^2 dt removes the tau^{-2/3}
// singularity; the Jacobi factors of s1, s2 are absorbed into Gauss-Jacobi rules.
class Weights {
 public:
  explicit Weights(const StarConfig& cfg);

  const StarConfig& config() const { return cfg_; }
  const Real& alpha() const { return alpha_; }
  const Real& a() const { return a_; }
  const Real& b() const { return b_; }
  Real alpha3() const { return alpha_ * alpha_ * alpha_; }
  Real a3() const { return a_ * a_ * a_; }
  Real b3() const { return b_ * b_ * b_; }

  Real s1(const Real& x) const;  // domain: 0 < x < alpha
  Real s2(const Real& t) const;  // domain: -b < t < -a

  // g(w) = int_{-b}^{-a} s2(t) / (w - t^3) dt, so f(z) = z^2 g(z^3).
  Real g(const Real& w) const;
  Cx g(const Cx& w) const;
  Cx f(const Cx& z) const;

  // Rule on (0, alpha): int F(t) s1(t) dt ~ sum t_w[i] F(t_x[i]).
  const std::vector<Real>& t_x() const { return tx_; }
  const std::vector<Real>& t_w() const { return tw_; }
  const std::vector<Real>& t_tau() const { return ttau_; }  // t_x^3
  const std::vector<Real>& t_g() const { return tg_; }      // g(t_x^3)
  // Rule on (-b, -a): int F(t) s2(t) dt ~ sum s_w[i] F(s_x[i]).
  const std::vector<Real>& s_x() const { return sx_; }
  const std::vector<Real>& s_w() const { return sw_; }

  Real moment(WeightId id, int k) const;
  // Error estimate: difference against the half-size rule, floored at roundoff.
  MomentValue moment_with_error(WeightId id, int k) const;

 private:
  Real moment_on(const std::vector<Real>& x, const std::vector<Real>& w, const std::vector<Real>& gv,
                 WeightId id, int k) const;
  void ensure_half_rule() const;

  StarConfig cfg_;
  Real alpha_, a_, b_;
  Real s1_gamma_, s1_delta_, s1_scale_, s2_gamma_, s2_delta_, s2_scale_;
  std::vector<Real> tx_, tw_, ttau_, tg_, sx_, sw_;

  mutable std::mutex mutex_;
  mutable std::map<std::pair<int, int>, Real> cache_;
  mutable std::vector<Real> hx_, hw_, hg_;
  mutable bool half_ready_ = false;
};

}  // namespace mop
