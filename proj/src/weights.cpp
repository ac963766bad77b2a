#include "mop/weights.hpp"

#include <stdexcept>

namespace mop {

const char* weight_name(WeightId id) {
  switch (id) {
    case WeightId::A: return "A";
    case WeightId::B: return "B";
    case WeightId::C: return "C";
    case WeightId::Af: return "Af";
    case WeightId::Bf: return "Bf";
    case WeightId::Cf: return "Cf";
  }
  return "?";
}

namespace {

// Map a [-1,1] Jacobi rule for (1-x)^p (1+x)^q onto [lo, hi] with scale factor.
void map_rule(const QuadRule& r, const Real& lo, const Real& hi, const Real& pq_sum, const Real& scale,
              std::vector<Real>& x, std::vector<Real>& w) {
  Real half = (hi - lo) / 2;
  Real jac = pow(half, pq_sum + 1) * scale;
  x.resize(r.x.size());
  w.resize(r.x.size());
  for (size_t i = 0; i < r.x.size(); ++i) {
    x[i] = lo + half * (1 + r.x[i]);
    w[i] = r.w[i] * jac;
  }
}

}  // namespace

Weights::Weights(const StarConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  alpha_ = cfg.alpha_value();
  a_ = cfg.a_value();
  b_ = cfg.b_value();
  s1_gamma_ = parse_config_number(cfg.s1.gamma, "s1.gamma");
  s1_delta_ = parse_config_number(cfg.s1.delta, "s1.delta");
  s1_scale_ = parse_config_number(cfg.s1.scale, "s1.scale");
  s2_gamma_ = parse_config_number(cfg.s2.gamma, "s2.gamma");
  s2_delta_ = parse_config_number(cfg.s2.delta, "s2.delta");
  s2_scale_ = parse_config_number(cfg.s2.scale, "s2.scale");

  const int n = cfg.quad_points;
  // s1: t^gamma at 0 is (1+x)^gamma, (alpha-t)^delta is (1-x)^delta.
  QuadRule r1 = gauss_jacobi(n, s1_delta_, s1_gamma_);
  map_rule(r1, Real(0), alpha_, s1_gamma_ + s1_delta_, s1_scale_, tx_, tw_);
  // s2: (|t|-a)^gamma vanishes at -a (x = 1), (b-|t|)^delta at -b (x = -1).
  QuadRule r2 = gauss_jacobi(n, s2_gamma_, s2_delta_);
  map_rule(r2, -b_, -a_, s2_gamma_ + s2_delta_, s2_scale_, sx_, sw_);

  ttau_.resize(tx_.size());
  tg_.resize(tx_.size());
  for (size_t i = 0; i < tx_.size(); ++i) {
    ttau_[i] = tx_[i] * tx_[i] * tx_[i];
    tg_[i] = g(ttau_[i]);
  }
}

Real Weights::s1(const Real& x) const {
  if (!(x > 0) || !(x < alpha_)) throw std::domain_error("s1 evaluated outside (0, alpha)");
  return s1_scale_ * pow(x, s1_gamma_) * pow(alpha_ - x, s1_delta_);
}

Real Weights::s2(const Real& t) const {
  if (!(t > -b_) || !(t < -a_)) throw std::domain_error("s2 evaluated outside (-b, -a)");
  return s2_scale_ * pow(-t - a_, s2_gamma_) * pow(t + b_, s2_delta_);
}

Real Weights::g(const Real& w) const {
  Real lo = -b3(), hi = -a3();
  Real tol = (hi - lo) * Real("1e-12");
  if (w > lo - tol && w < hi + tol) throw std::domain_error("g evaluated on or too close to [-b^3, -a^3]");
  Real s = 0;
  for (size_t i = 0; i < sx_.size(); ++i) s += sw_[i] / (w - sx_[i] * sx_[i] * sx_[i]);
  return s;
}

Cx Weights::g(const Cx& w) const {
  Real lo = -b3(), hi = -a3();
  Real dx = w.re < lo ? Real(lo - w.re) : (w.re > hi ? Real(w.re - hi) : Real(0));
  Real dist = sqrt(dx * dx + w.im * w.im);
  if (dist < (hi - lo) * Real("1e-12")) throw std::domain_error("g evaluated on or too close to [-b^3, -a^3]");
  Cx s(Real(0), Real(0));
  for (size_t i = 0; i < sx_.size(); ++i) s += Cx(sw_[i]) / (w - sx_[i] * sx_[i] * sx_[i]);
  return s;
}

Cx Weights::f(const Cx& z) const { return z * z * g(z * z * z); }

Real Weights::moment_on(const std::vector<Real>& x, const std::vector<Real>& w, const std::vector<Real>& gv,
                        WeightId id, int k) const {
  int power = 0;
  bool with_g = false;
  switch (id) {
    case WeightId::A: power = 3 * k; break;
    case WeightId::B: power = 3 * k + 2; break;
    case WeightId::C: power = 3 * k + 4; break;
    case WeightId::Af: power = 3 * k + 3; with_g = true; break;
    case WeightId::Bf: power = 3 * k + 5; with_g = true; break;
    case WeightId::Cf: power = 3 * k + 7; with_g = true; break;
  }
  Real s = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    Real term = w[i] * pow(x[i], power);
    if (with_g) term *= gv[i];
    s += term;
  }
  return 3 * s;
}

Real Weights::moment(WeightId id, int k) const {
  if (k < 0) throw std::invalid_argument("moment index must be nonnegative");
  auto key = std::make_pair(static_cast<int>(id), k);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  Real v = moment_on(tx_, tw_, tg_, id, k);
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.emplace(key, v).first->second;
}

void Weights::ensure_half_rule() const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (half_ready_) return;
  QuadRule r = gauss_jacobi(cfg_.quad_points / 2, s1_delta_, s1_gamma_);
  map_rule(r, Real(0), alpha_, s1_gamma_ + s1_delta_, s1_scale_, hx_, hw_);
  hg_.resize(hx_.size());
  for (size_t i = 0; i < hx_.size(); ++i) hg_[i] = g(hx_[i] * hx_[i] * hx_[i]);
  half_ready_ = true;
}

MomentValue Weights::moment_with_error(WeightId id, int k) const {
  ensure_half_rule();
  Real full = moment(id, k);
  Real half = moment_on(hx_, hw_, hg_, id, k);
  Real floor = abs(full) * epsilon_bits(precision_bits() - 16);
  Real diff = abs(full - half);
  return {full, diff > floor ? diff : floor};
}

}  // namespace mop
