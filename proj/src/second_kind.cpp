#include "mop/second_kind.hpp"

#include "mop/errors.hpp"
#include "mop/parallel.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <complex>
#include <sstream>

namespace mop {

int expected_P2_degree(int n) { return n / 6 + (n % 6 == 4 ? 1 : 0); }

namespace {

int prefactor_exponent(int r) { return r == 0 ? 2 : (r == 1 ? 0 : 1); }
int h_exponent(int r) { return r == 0 ? 2 : (r == 1 ? 1 : 3); }

}  // namespace

SecondKind::SecondKind(const MopSystem& sys) : sys_(sys), w_(sys.weights()) {
  const int nm = sys.n_max() + 1;
  const auto& tau = w_.t_tau();
  c_.assign(nm + 1, std::vector<Real>(tau.size()));
  parallel_for(0, nm + 1, [&](int n) {
    const Poly& p = sys_.P(n).coeffs;
    for (size_t q = 0; q < tau.size(); ++q) c_[n][q] = norm_weight(n, q) * eval(p, tau[q]);
  });
  rec_.resize(nm + 1);
  hv_.resize(nm + 1);
  parallel_for(0, nm + 1, [&](int n) { rec_[n] = build(n); });
}

Real SecondKind::norm_weight(int n, size_t q) const {
  // dtau/tau^{2/3} = 3 dt for r = 0; cbrt(tau) dtau = 3 t^3 dt for r = 1, 2.
  Real v = 3 * w_.t_w()[q];
  if (n % 3 != 0) v *= w_.t_tau()[q];
  return v;
}

void SecondKind::check_pole(const Cx& w) const {
  // The t-rule sees poles at the three cube roots of w; its error decays like
  // rho^{-2N} with rho the Bernstein ellipse parameter of the nearest one.
  const std::complex<double> wd = to_std(w);
  const double alpha = to_double(w_.alpha());
  const double r = std::cbrt(std::abs(wd));
  const double th = std::arg(wd) / 3;
  double rho_min = 1e300;
  for (int k = 0; k < 3; ++k) {
    std::complex<double> u = std::polar(r, th + 2 * M_PI * k / 3);
    std::complex<double> x = 2.0 * u / alpha - 1.0;
    double rho = std::abs(x + std::sqrt(x - 1.0) * std::sqrt(x + 1.0));
    if (rho < 1) rho = 1 / rho;
    rho_min = std::min(rho_min, rho);
  }
  const double need = precision_bits() / 4.0 * std::log(2.0);
  if (2.0 * static_cast<double>(w_.t_x().size()) * std::log(rho_min) < need) {
    std::ostringstream os;
    os << "evaluation point w = " << wd << " too close to [0, alpha^3] for the quadrature rule";
    throw NumericalError(os.str());
  }
}

Real SecondKind::Phi(int n, const Real& w) const {
  check_pole(Cx(w));
  const auto& tau = w_.t_tau();
  const auto& c = c_.at(n);
  Real s = 0;
  for (size_t q = 0; q < tau.size(); ++q) s += c[q] / (tau[q] - w);
  return s;
}

Cx SecondKind::Phi(int n, const Cx& w) const {
  check_pole(w);
  const auto& tau = w_.t_tau();
  const auto& c = c_.at(n);
  Cx s(Real(0), Real(0));
  for (size_t q = 0; q < tau.size(); ++q) s += c[q] / (tau[q] - w);
  return s;
}

Real SecondKind::Psi(int n, const Real& t) const { return pow(t, prefactor_exponent(n % 3)) * Phi(n, Real(t * t * t)); }

Cx SecondKind::Psi(int n, const Cx& z) const { return ipow(z, prefactor_exponent(n % 3)) * Phi(n, z * z * z); }

const SecondKindRecord& SecondKind::record(int n) const {
  if (n < 0 || n >= static_cast<int>(rec_.size())) throw std::out_of_range("second-kind index out of range");
  return rec_[n];
}

SecondKindRecord SecondKind::find_P2(int n) const {
  const int expected = expected_P2_degree(n);
  const Real lo = -w_.b3(), hi = -w_.a3();
  const int bits = precision_bits();
  SecondKindRecord out;
  out.n = n;
  std::string diag;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const int grid = 64 * (n / 6 + 1) * (attempt == 0 ? 1 : 4);
    // Chebyshev-spaced interior grid, denser near the endpoints.
    std::vector<Real> x(grid + 1), v(grid + 1);
    for (int i = 1; i < grid; ++i) {
      x[i] = lo + (hi - lo) * (1 - cos(pi() * i / grid)) / 2;
      v[i] = Phi(n, x[i]);
    }
    std::vector<Real> roots;
    for (int i = 1; i + 1 < grid; ++i) {
      if (v[i] == 0) {
        roots.push_back(x[i]);
        continue;
      }
      if ((v[i] < 0) == (v[i + 1] < 0) || v[i + 1] == 0) continue;
      auto fn = [&](const Real& w) { return Phi(n, w); };
      boost::math::tools::eps_tolerance<Real> tol(bits - 8);
      std::uintmax_t iters = 200;
      auto br = boost::math::tools::toms748_solve(fn, x[i], x[i + 1], v[i], v[i + 1], tol, iters);
      roots.push_back((br.first + br.second) / 2);
    }
    if (static_cast<int>(roots.size()) == expected) {
      out.roots = roots;
      out.grid_points = grid;
      out.P2 = from_roots(roots);
      return out;
    }
    std::ostringstream os;
    os << "grid " << grid << ": found " << roots.size() << " sign changes, expected " << expected;
    diag += (diag.empty() ? "" : "; ") + os.str();
  }
  throw HypothesisViolation("zeros of Phi_" + std::to_string(n) + " on (-b^3, -a^3): " + diag);
}

SecondKindRecord SecondKind::build(int n) {
  SecondKindRecord out = find_P2(n);
  const auto& tau = w_.t_tau();
  const Poly& p = sys_.P(n).coeffs;
  std::vector<Real>& v = hv_[n];
  v.resize(tau.size());
  Real inv = 0;
  for (size_t q = 0; q < tau.size(); ++q) {
    Real pv = eval(p, tau[q]);
    v[q] = norm_weight(n, q) * pv * pv / eval(out.P2, tau[q]);
    inv += v[q];
  }
  out.K = 1 / sqrt(inv);
  out.kappa = out.K;
  // K_{n,2}: the cbrt(tau), tau, tau^{2/3} divisors combine with dtau = 3t^2 dt
  // into 3|t|, 3/|t|, 3.
  const int r = n % 3;
  const auto& sx = w_.s_x();
  const auto& sw = w_.s_w();
  Real inv2 = 0;
  for (size_t i = 0; i < sx.size(); ++i) {
    const Real& t = sx[i];
    Real t3 = t * t * t;
    Real p2 = eval(out.P2, t3);
    Real fac = r == 0 ? Real(abs(t)) : (r == 1 ? Real(1 / abs(t)) : Real(1));
    inv2 += sw[i] * p2 * p2 * 3 * abs(H_real(n, t, v)) * fac / abs(eval(p, t3));
  }
  if (!(inv > 0) || !(inv2 > 0) || !isfinite(inv2)) {
    throw HypothesisViolation("non-finite or non-positive norm integral at n = " + std::to_string(n));
  }
  out.K2 = 1 / sqrt(inv2);
  out.kappa2 = out.K2 / out.K;
  return out;
}

Real SecondKind::H_real(int n, const Real& t, const std::vector<Real>& v) const {
  const Real w = t * t * t;
  check_pole(Cx(w));
  const auto& tau = w_.t_tau();
  Real s = 0;
  for (size_t q = 0; q < tau.size(); ++q) s += v[q] / (tau[q] - w);
  return pow(t, h_exponent(n % 3)) * s;
}

Cx SecondKind::H_cx(int n, const Cx& z, const std::vector<Real>& v) const {
  const Cx w = z * z * z;
  check_pole(w);
  const auto& tau = w_.t_tau();
  Cx s(Real(0), Real(0));
  for (size_t q = 0; q < tau.size(); ++q) s += v[q] / (tau[q] - w);
  return ipow(z, h_exponent(n % 3)) * s;
}

Cx SecondKind::h(int n, const Cx& z) const {
  const auto& r = record(n);
  return r.K * r.K * H_cx(n, z, hv_[n]);
}

Real SecondKind::H_abs(int n, const Real& t) const {
  record(n);
  return abs(H_real(n, t, hv_[n]));
}

Cx SecondKind::h_limit(int n, const Cx& z) const {
  const Cx w = z * z * z;
  const Real A = w_.alpha3();
  // sqrt(w) sqrt(w - A) with principal roots: both jump on (-inf, 0), so the
  // product is continuous there and the only cut is [0, A].
  Cx root = sqrt(w) * sqrt(w - A);
  return -ipow(z, h_exponent(n % 3)) / root;
}

Real SecondKind::psi_orthogonality_residual(int n) const {
  const int l = n / 6;
  const int kmax = (n % 6 == 4) ? l : l - 1;
  if (kmax < 0) return 0;
  const int r = n % 3;
  const auto& sx = w_.s_x();
  const auto& sw = w_.s_w();
  std::vector<Real> base(sx.size());
  for (size_t i = 0; i < sx.size(); ++i) {
    const Real& t = sx[i];
    // tau^{-1/3}, 1, tau^{-2/3} times dtau = 3t^2 dt for r = 0, 2, 1.
    Real fac = r == 0 ? t : (r == 2 ? Real(t * t) : Real(1));
    base[i] = 3 * sw[i] * fac * Psi(n, t);
  }
  Real worst = 0;
  for (int k = 0; k <= kmax; ++k) {
    Real s = 0, scale = 0;
    for (size_t i = 0; i < sx.size(); ++i) {
      Real term = base[i] * pow(sx[i], 3 * k);
      s += term;
      scale += abs(term);
    }
    worst = std::max(worst, Real(abs(s) / scale));
  }
  return worst;
}

Real SecondKind::varying_orthogonality_residual(int n) const {
  const auto& p = sys_.P(n).coeffs;
  const int d = static_cast<int>(p.size()) - 1;
  const auto& tau = w_.t_tau();
  const Poly& P2 = record(n).P2;
  Real worst = 0;
  for (int j = 0; j < d; ++j) {
    Real s = 0, scale = 0;
    for (size_t q = 0; q < tau.size(); ++q) {
      Real term = norm_weight(n, q) * pow(tau[q], j) * eval(p, tau[q]) / eval(P2, tau[q]);
      s += term;
      scale += abs(term);
    }
    worst = std::max(worst, Real(abs(s) / scale));
  }
  return worst;
}

Real SecondKind::varying_orthogonality_residual_2(int n) const {
  const auto& rec = record(n);
  const int d = static_cast<int>(rec.P2.size()) - 1;
  if (d <= 0) return 0;
  const int r = n % 3;
  const auto& p = sys_.P(n).coeffs;
  const auto& sx = w_.s_x();
  const auto& sw = w_.s_w();
  std::vector<Real> base(sx.size());
  for (size_t i = 0; i < sx.size(); ++i) {
    const Real& t = sx[i];
    Real t3 = t * t * t;
    Real fac = r == 0 ? Real(abs(t)) : (r == 1 ? Real(1 / abs(t)) : Real(1));
    base[i] = 3 * sw[i] * eval(rec.P2, t3) * H_abs(n, t) * fac / abs(eval(p, t3));
  }
  Real worst = 0;
  for (int k = 0; k < d; ++k) {
    Real s = 0, scale = 0;
    for (size_t i = 0; i < sx.size(); ++i) {
      Real term = base[i] * pow(sx[i], 3 * k);
      s += term;
      scale += abs(term);
    }
    worst = std::max(worst, Real(abs(s) / scale));
  }
  return worst;
}

SignLawReport SecondKind::sign_law(int n, int samples) const {
  SignLawReport rep;
  rep.n = n;
  const int k = n / 3;
  const int parity = (n % 3 == 2) ? 3 * k + 1 : 3 * k;
  rep.expected = parity % 2 == 0 ? 1 : -1;
  const Real a = w_.a(), b = w_.b();
  const Poly& P2 = record(n).P2;
  for (int i = 0; i < samples; ++i) {
    Real t = -b + (b - a) * (2 * i + 1) / (2 * samples);
    Real ratio = Psi(n, t) / eval(P2, Real(t * t * t));
    int sg = ratio > 0 ? 1 : (ratio < 0 ? -1 : 0);
    rep.sample_t.push_back(t);
    rep.sign.push_back(sg);
    if (sg != rep.expected) rep.ok = false;
  }
  return rep;
}

InterlacingReport SecondKind::check_interlacing(int n) const {
  const auto& x = record(n).roots;
  const auto& y = record(n + 1).roots;
  int first = -1;
  if (y.size() == x.size() + 1) first = 1;
  if (x.size() == y.size() + 1) first = 0;
  InterlacingReport rep = check_alternation(x, y, first);
  rep.n = n;
  const long diff = static_cast<long>(x.size()) - static_cast<long>(y.size());
  if (diff > 1 || diff < -1) {
    rep.directed = false;
    rep.violations.push_back("zero counts differ by more than one");
  }
  return rep;
}

}  // namespace mop
