#include "mop/riemann_surface.hpp"

#include "mop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mop {

namespace {

// Value with gradient in (beta, gamma).
template <class T>
struct D2 {
  T v, db, dg;
};
template <class T> D2<T> operator+(const D2<T>& x, const D2<T>& y) { return {x.v + y.v, x.db + y.db, x.dg + y.dg}; }
template <class T> D2<T> operator-(const D2<T>& x, const D2<T>& y) { return {x.v - y.v, x.db - y.db, x.dg - y.dg}; }
template <class T> D2<T> operator*(const D2<T>& x, const D2<T>& y) {
  return {x.v * y.v, x.v * y.db + x.db * y.v, x.v * y.dg + x.dg * y.v};
}
template <class T> D2<T> operator*(const T& s, const D2<T>& x) { return {s * x.v, s * x.db, s * x.dg}; }
template <class T> D2<T> cst(const T& s) { return {s, T(0), T(0)}; }
template <class T> D2<T> dpow(const D2<T>& x, int k) {
  D2<T> out = cst(T(1));
  for (int j = 0; j < k; ++j) out = out * x;
  return out;
}

template <class T>
std::array<D2<T>, 2> system(const T& lambda, const T& mu, const T& beta, const T& gamma) {
  const D2<T> b{beta, T(1), T(0)}, g{gamma, T(0), T(1)};
  const D2<T> s = b + g, p = b * g, diff = b - g;
  const D2<T> three = cst(T(3)), one = cst(T(1)), two = cst(T(2));
  D2<T> e1 = T(2) * (s * (three - p - s) * (three - p + s)) + (lambda - mu) * dpow(diff, 3);
  D2<T> e2 = ((lambda + mu) * (lambda + mu)) * dpow(diff, 6) -
             T(4) * (dpow(three + p, 3) * (one - p) * (two + s) * (two - s));
  return {e1, e2};
}

template <class T>
T sys_norm(const std::array<D2<T>, 2>& e) {
  using std::abs;
  return abs(e[0].v) + abs(e[1].v);
}

// Newton step solving J step = -e.
template <class T>
bool newton_step(const std::array<D2<T>, 2>& e, T& sb, T& sg) {
  using std::abs;
  T det = e[0].db * e[1].dg - e[0].dg * e[1].db;
  if (det == 0) return false;
  sb = -(e[0].v * e[1].dg - e[0].dg * e[1].v) / det;
  sg = -(e[0].db * e[1].v - e[0].v * e[1].db) / det;
  return true;
}

bool damped_newton(double lambda, double mu, double& b, double& g) {
  const double tol = 1e-13 * (1 + (lambda + mu) * (lambda + mu));
  for (int it = 0; it < 200; ++it) {
    auto e = system(lambda, mu, b, g);
    double f = sys_norm(e);
    if (f < tol) return true;
    double sb, sg;
    if (!newton_step(e, sb, sg)) return false;
    double t = 1;
    bool moved = false;
    for (int h = 0; h < 40; ++h, t /= 2) {
      double nb = b + t * sb, ng = g + t * sg;
      if (sys_norm(system(lambda, mu, nb, ng)) < f) {
        b = nb;
        g = ng;
        moved = true;
        break;
      }
    }
    if (!moved) return sys_norm(system(lambda, mu, b, g)) < tol;
  }
  return false;
}

std::complex<double> cubic_d(const std::complex<double>& w, const std::complex<double>& p,
                             const std::complex<double>& q, double r) {
  return ((w + p) * w + q) * w + r;
}

// Newton in double; false when it fails to settle.
bool newton_d(std::complex<double>& w, const std::complex<double>& p, const std::complex<double>& q, double r) {
  double prev = 1e300;
  for (int it = 0; it < 40; ++it) {
    std::complex<double> f = cubic_d(w, p, q, r);
    std::complex<double> df = (3.0 * w + 2.0 * p) * w + q;
    if (df == 0.0) return false;
    std::complex<double> dw = f / df;
    w -= dw;
    const double s = std::abs(dw) / (1 + std::abs(w));
    if (s <= 1e-15 || (s <= 1e-10 && s > prev / 2)) return true;
    prev = s;
  }
  return false;
}

double min_sep(const std::array<std::complex<double>, 3>& w) {
  return std::min({std::abs(w[0] - w[1]), std::abs(w[0] - w[2]), std::abs(w[1] - w[2])});
}

}  // namespace

std::array<Real, 2> beta_gamma_residuals(const Real& lambda, const Real& mu, const Real& beta, const Real& gamma) {
  auto e = system(lambda, mu, beta, gamma);
  return {abs(e[0].v), abs(e[1].v)};
}

std::pair<Real, Real> solve_beta_gamma(const Real& lambda, const Real& mu) {
  if (!(lambda > 1) || !(mu > 1)) throw HypothesisViolation("beta/gamma system needs lambda > 1 and mu > 1");
  const double ld = to_double(lambda), md = to_double(mu);
  std::vector<std::pair<double, double>> roots;
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      double b = -1 + 2 * (i + 0.5) / 16, g = -1 + 2 * (j + 0.5) / 16;
      if (!(g < b)) continue;
      if (!damped_newton(ld, md, b, g)) continue;
      if (!(-1 < g && g < b && b < 1)) continue;
      bool dup = false;
      for (auto& r : roots) dup = dup || (std::abs(r.first - b) + std::abs(r.second - g) < 1e-8);
      if (!dup) roots.emplace_back(b, g);
    }
  }
  if (roots.empty()) {
    std::ostringstream os;
    os << "beta/gamma system: no root with -1 < gamma < beta < 1; residual landscape (log10):\n";
    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 16; ++j) {
        double b = -1 + 2 * (i + 0.5) / 16, g = -1 + 2 * (j + 0.5) / 16;
        if (g < b) os << ' ' << std::lround(std::log10(sys_norm(system(ld, md, b, g)) + 1e-300));
      }
      os << '\n';
    }
    throw NumericalError(os.str());
  }
  if (roots.size() > 1) {
    std::ostringstream os;
    os << "beta/gamma system has " << roots.size() << " constrained roots:";
    for (auto& r : roots) os << " (" << r.first << ", " << r.second << ")";
    throw HypothesisViolation(os.str());
  }

  Real b(roots[0].first), g(roots[0].second);
  const Real step_tol = epsilon_bits(precision_bits()) * 16;
  for (int it = 0; it < 100; ++it) {
    auto e = system(lambda, mu, b, g);
    Real sb, sg;
    if (!newton_step(e, sb, sg)) throw NumericalError("beta/gamma polish: singular Jacobian");
    b += sb;
    g += sg;
    if (abs(sb) + abs(sg) <= step_tol) break;
  }
  auto res = beta_gamma_residuals(lambda, mu, b, g);
  const Real tol = pow10_neg(precision_bits() / 4) * (1 + (lambda + mu) * (lambda + mu));
  if (res[0] > tol || res[1] > tol)
    throw NumericalError("beta/gamma polish stalled at residual " + to_string(std::max(res[0], res[1]), 6));
  if (!(-1 < g && g < b && b < 1)) throw HypothesisViolation("beta/gamma polish left the constraint region");
  return {b, g};
}

RiemannSurface::RiemannSurface(const StarConfig& cfg) : bits_(precision_bits()) {
  cfg.validate();
  const Real al = cfg.alpha_value(), a = cfg.a_value(), b = cfg.b_value();
  m_.alpha3 = al * al * al;
  m_.a3 = a * a * a;
  m_.b3 = b * b * b;
  m_.lambda = cfg.lambda();
  m_.mu = cfg.mu();
  std::tie(m_.beta, m_.gamma) = solve_beta_gamma(m_.lambda, m_.mu);
  auto res = beta_gamma_residuals(m_.lambda, m_.mu, m_.beta, m_.gamma);
  m_.residual1 = res[0];
  m_.residual2 = res[1];

  const Real& be = m_.beta;
  const Real& ga = m_.gamma;
  const Real s = be + ga;
  const Real q = (be - ga) * (be - ga) / (1 - be * ga) - 3;
  const Real disc = s * s - 4 * q;
  if (!(disc > 0)) throw HypothesisViolation("c/d quadratic has no real roots");
  const Real sq = sqrt(disc);
  m_.c = (-s - sq) / 2;
  m_.d = (-s + sq) / 2;
  if (!(m_.c < -1 && m_.d > 1)) throw HypothesisViolation("c/d roots fail c < -1 < 1 < d");

  m_.theta1 = (1 - m_.c) * (1 - m_.d) * (1 - be) * (1 - ga) / 4;
  m_.theta2 = (1 + m_.c) * (1 + m_.d) * (1 + be) * (1 + ga) / 4;
  m_.h = s * (2 * be * ga - (be - ga) * (be - ga) / (1 - be * ga)) / 4;
  m_.H_beta = m_.h + be + m_.theta1 * be / (1 - be) + m_.theta2 * be / (1 + be);
  if (m_.H_beta == 0) throw HypothesisViolation("H(beta) vanishes");
  const Real& H = m_.H_beta;
  m_.B = m_.a3 * m_.theta1 / (2 * H * H);
  m_.C_prod = 2 * m_.theta1 / (H * H * H);
  m_.psi0_inf = -2 / H;

  auto [p1, p0] = std::pair<Real, Real>(2 / m_.a3, 1 + (3 + m_.h + m_.theta2 - m_.theta1) / H);
  p1_ = to_double(p1);
  p0_ = to_double(p0);
  q1_ = to_double(4 / (m_.a3 * H));
  q0_ = to_double(2 / H + (2 + 2 * m_.h + m_.theta2 - 3 * m_.theta1) / (H * H));
  r_ = to_double(-m_.C_prod);
}

std::pair<Cx, Cx> RiemannSurface::pq(const Cx& z) const {
  const Real& H = m_.H_beta;
  Cx p = z * (2 / m_.a3) + (1 + (3 + m_.h + m_.theta2 - m_.theta1) / H);
  Cx q = z * (4 / (m_.a3 * H)) + (2 / H + (2 + 2 * m_.h + m_.theta2 - 3 * m_.theta1) / (H * H));
  return {p, q};
}

Real RiemannSurface::cubic_residual(const Cx& z, const Cx& w) const {
  auto [p, q] = pq(z);
  const Real r = -m_.C_prod;
  Cx w2 = w * w;
  Cx f = w2 * w + p * w2 + q * w + r;
  Real scale = std::max({abs(w2 * w), abs(p * w2), abs(q * w), abs(r)});
  return abs(f) / scale;
}

void RiemannSurface::check_admissible(const Cx& z) const {
  const Real tol = Real(1e-10) * z_ref();
  for (const Real& e : {Real(0), m_.alpha3, Real(-m_.a3), Real(-m_.b3)}) {
    if (abs(z - e) < tol)
      throw NumericalError("branch point proximity: |z - " + to_string(e, 8) + "| < " + to_string(tol, 3));
  }
  if (z.im == 0 && ((z.re >= 0 && z.re <= m_.alpha3) || (z.re >= -m_.b3 && z.re <= -m_.a3)))
    throw NumericalError("z = " + to_string(z.re, 12) + " lies on a cut; approach it from above or below");
}

std::array<std::complex<double>, 3> RiemannSurface::track(const Cx& z) const {
  using C = std::complex<double>;
  const std::complex<double> zd = to_std(z);
  const double zr = to_double(z_ref());
  const double side = zd.imag() < 0 ? -1.0 : 1.0;
  const C z1 = zd + C(0, side * zr);
  const double M = 100 * zr * 10;
  const C zf = std::abs(z1) < M ? z1 * (M / std::abs(z1)) : z1;

  auto pq_d = [&](const C& x) { return std::pair<C, C>(p1_ * x + p0_, q1_ * x + q0_); };

  // Asymptotic matching: psi_1 ~ -2z/a^3 - p0 - psi_0(inf), psi_0 ~ -2/H, psi_2 ~ B/z.
  const double psi0_inf = to_double(m_.psi0_inf), Bd = to_double(m_.B);
  std::array<C, 3> guess{C(psi0_inf), -p1_ * zf - p0_ - psi0_inf, Bd / zf};
  std::array<C, 3> w = guess;
  auto [pf, qf] = pq_d(zf);
  for (int k = 0; k < 3; ++k) {
    if (!newton_d(w[k], pf, qf, r_) || std::abs(w[k] - guess[k]) > 0.1 * std::abs(guess[k]))
      throw NumericalError("asymptotic branch matching failed at the far reference point");
  }
  if (min_sep(w) == 0) throw NumericalError("branches coincide at the far reference point");

  auto follow = [&](const C& from, const C& to) {
    double t = 0, dt = 1.0 / 64;
    while (t < 1) {
      double tn = std::min(1.0, t + dt);
      C x = from + (to - from) * tn;
      auto [p, q] = pq_d(x);
      std::array<C, 3> wn = w;
      bool ok = true;
      for (int k = 0; k < 3 && ok; ++k) {
        // Each root may move at most a quarter of its distance to the others.
        const double sep = std::min(std::abs(w[k] - w[(k + 1) % 3]), std::abs(w[k] - w[(k + 2) % 3]));
        ok = newton_d(wn[k], p, q, r_) && std::abs(wn[k] - w[k]) < 0.25 * sep;
      }
      if (ok && min_sep(wn) > 0) {
        w = wn;
        t = tn;
        dt = std::min(dt * 2, 0.25);
      } else {
        dt /= 2;
        if (dt < 1e-15) throw NumericalError("branch continuation failed to advance");
      }
    }
  };
  if (zf != z1) follow(zf, z1);
  follow(z1, zd);
  return w;
}

std::array<Cx, 3> RiemannSurface::eval_branches(const Cx& z) const {
  check_admissible(z);
  auto wd = track(z);
  auto [p, q] = pq(z);
  const Real r = -m_.C_prod;
  const Real step_tol = epsilon_bits(bits_) * 16;
  const Real stall = epsilon_bits(bits_ / 2);
  std::array<Cx, 3> out;
  for (int k = 0; k < 3; ++k) {
    Cx w = from_std(wd[k]);
    Real prev = -1;
    for (int it = 0; it < 100; ++it) {
      Cx f = ((w + p) * w + q) * w + r;
      Cx df = (Real(3) * w + Real(2) * p) * w + q;
      Cx dw = f / df;
      w -= dw;
      const Real s = abs(dw) / (1 + abs(w));
      // Stop at the tolerance or once roundoff stops the quadratic contraction.
      if (s <= step_tol || (prev >= 0 && s < stall && s > prev / 2)) break;
      prev = s;
    }
    if (abs(w - from_std(wd[k])) > Real(1e-6) * (1 + abs(w)))
      throw NumericalError("branch polish drifted away from its continued label");
    out[k] = w;
  }
  const Real amb = Real(1e-20);
  if (abs(out[0] - out[1]) < amb || abs(out[0] - out[2]) < amb || abs(out[1] - out[2]) < amb)
    throw NumericalError("label ambiguity: two branches agree to 1e-20");
  return out;
}

std::array<Cx, 3> RiemannSurface::normalized_branches(const Cx& z) const {
  auto w = eval_branches(z);
  return {w[0] / m_.psi0_inf, w[1] / Real(-2 / m_.a3), w[2] / m_.B};
}

Real RiemannSurface::delta_a() const { return -m_.a3 * m_.theta2 / (4 * m_.H_beta); }

ALimits RiemannSurface::closed_form_limits() const {
  // With w = psi_0(inf) u the cubic at z = 0 becomes u^3 - A u^2 + Bc u - Cc.
  // Its double root x (a zero of 3u^2 - 2A u + Bc) is a^(3)/a^(0); the simple
  // root y = A - 2x is a^(1)/a^(4).
  const Real& H = m_.H_beta;
  const Real p0 = 1 + (3 + m_.h + m_.theta2 - m_.theta1) / H;
  const Real q0 = 2 / H + (2 + 2 * m_.h + m_.theta2 - 3 * m_.theta1) / (H * H);
  const Real A = p0 * H / 2, Bc = q0 * H * H / 4, Cc = -m_.theta1 / 4;
  const Real disc = 4 * A * A - 12 * Bc;
  if (disc < 0) throw HypothesisViolation("cubic at z = 0 has no real double root");
  const Real sq = sqrt(disc);
  Real best_res = -1, x, y;
  for (int sgn : {1, -1}) {
    Real xc = (2 * A + sgn * sq) / 6;
    Real yc = A - 2 * xc;
    Real res = abs(xc * xc * yc - Cc);
    if (best_res < 0 || res < best_res) {
      best_res = res;
      x = xc;
      y = yc;
    }
  }
  if (best_res > pow10_neg(bits_ / 4) * (1 + abs(Cc)))
    throw HypothesisViolation("cubic at z = 0 has no double root (residual " + to_string(best_res, 6) + ")");
  const Real D = delta_a();
  ALimits a;
  a.a0 = D / (1 - x);
  a.a3 = x * a.a0;
  a.a4 = D / (1 - y);
  a.a1 = y * a.a4;
  if (!(a.a0 > 0 && a.a1 > 0 && a.a3 > 0 && a.a4 > 0 && a.a4 > a.a1 && a.a0 > a.a3))
    throw HypothesisViolation("closed-form recurrence limits violate positivity or ordering");
  return a;
}

std::array<Real, 6> RiemannSurface::omega1(const ALimits& a) {
  const Real d0 = a.a0 - a.a3, d1 = a.a4 - a.a1;
  std::array<Real, 6> w;
  w[0] = w[2] = d1 / (a.a0 * a.a4);
  w[1] = a.a4 / d1;
  w[3] = w[5] = a.a0 / d0;
  w[4] = d0 / (a.a0 * a.a0);
  return w;
}

Cx RiemannSurface::limiting_F(int i, int family, const Cx& z, const ALimits& a) const {
  if (i < 0 || i > 5 || (family != 1 && family != 2)) throw std::invalid_argument("limiting_F: bad index or family");
  if (!(a.a0 > 0 && a.a1 > 0 && a.a3 > 0 && a.a4 > 0) || a.a0 == a.a3 || !(a.a4 > a.a1))
    throw std::invalid_argument("limiting_F: limits must be positive with a0 != a3 and a4 > a1");
  auto u = normalized_branches(z);
  const Real d0 = a.a0 - a.a3, d1 = a.a4 - a.a1;
  const Real tiny = epsilon_bits(bits_ / 2);
  auto guard = [&](const Cx& den, const Real& scale) {
    if (abs(den) <= tiny * scale) throw NumericalError("limiting_F: denominator vanishes at z");
  };
  const Cx den0 = a.a0 * u[0] - a.a3;
  const Cx den1 = a.a4 * u[0] - a.a1;
  guard(den0, a.a0 * (1 + abs(u[0])));
  guard(den1, a.a4 * (1 + abs(u[0])));
  if (family == 1) {
    switch (i) {
      case 0: return Cx(d0) / den0;
      case 1: return d1 * u[0] / den1;
      case 2: return z * (Cx(d0) / den0);
      case 3: return d0 * u[0] / den0;
      case 4: return Cx(d1) / den1;
      default: return z * (d0 * u[0] / den0);
    }
  }
  const auto w = omega1(a);
  if (i == 0 || i == 2 || i == 3 || i == 5) {
    const Cx g = a.a0 - (a.a3 * w[3] / w[0]) * (u[0] * u[2]);
    guard(g, a.a0 * (1 + abs(u[0] * u[2])));
    const Cx F3 = (a.a0 * d0) * z * u[0] / (g * den0);
    return (i == 3 || i == 5) ? F3 : F3 * u[2];
  }
  const Cx g = u[1] - (w[1] - 1) / w[4];
  guard(g, 1 + abs(u[1]));
  const Cx F4 = (Cx(d1) / den1) / g;
  return i == 4 ? F4 : F4 / u[2];
}

BoundaryLaw RiemannSurface::boundary_law(int family, int l, const ALimits& a, int points, double eps) const {
  BoundaryLaw out;
  out.family = family;
  out.l = l;
  const Real lo = family == 1 ? Real(0) : Real(-m_.b3);
  const Real hi = family == 1 ? m_.alpha3 : Real(-m_.a3);
  const Real e(eps);
  const int g = l % 3;
  for (int j = 0; j < points; ++j) {
    Real tau = lo + (hi - lo) * (2 * j + 1) / (2 * points);
    out.tau.push_back(tau);
    for (int side : {1, -1}) {
      Cx z(tau, side * e);
      Cx F1 = limiting_F(l, 1, z, a), F2 = limiting_F(l, 2, z, a);
      Real v;
      if (family == 1) {
        // |F1|^2 tau / F2, |F1|^2 / F2, |F1|^2 / (tau F2) for l mod 3 = 0, 1, 2.
        v = norm(F1) / abs(F2);
        if (g == 0) v *= tau;
        if (g == 2) v /= tau;
      } else {
        // |F2|^2 / |tau F1|, |F2|^2 |tau| / |F1|, |F2|^2 / |F1|.
        v = norm(F2) / abs(F1);
        if (g == 0) v /= abs(tau);
        if (g == 1) v *= abs(tau);
      }
      out.values.push_back(v);
    }
  }
  Real sum = 0;
  for (auto& v : out.values) sum += v;
  out.constant = sum / out.values.size();
  Real dev = 0, var = 0;
  for (auto& v : out.values) {
    Real r = v / out.constant - 1;
    dev = std::max(dev, Real(abs(r)));
    var += r * r;
  }
  out.max_rel_dev = dev;
  out.rel_variance = var / out.values.size();
  return out;
}

std::vector<Cx> RiemannSurface::sample_points(int count, double margin) const {
  // Additive recurrence on the plastic-number lattice over a box holding both cuts.
  const double g1 = 0.7548776662466927, g2 = 0.5698402909980532;
  const double A = to_double(m_.alpha3), a3 = to_double(m_.a3), b3 = to_double(m_.b3);
  const double cx = (A - b3) / 2, half = (A + b3) / 2 + 1;
  auto dist = [](double x, double y, double lo, double hi) {
    if (x >= lo && x <= hi) return std::abs(y);
    double ex = x < lo ? lo : hi;
    return std::hypot(x - ex, y);
  };
  std::vector<Cx> out;
  for (long k = 1; static_cast<int>(out.size()) < count; ++k) {
    double u = std::fmod(0.5 + g1 * k, 1.0), v = std::fmod(0.5 + g2 * k, 1.0);
    double x = cx + half * (2 * u - 1), y = half * (2 * v - 1);
    if (dist(x, y, 0, A) < margin || dist(x, y, -b3, -a3) < margin) continue;
    out.emplace_back(Real(x), Real(y));
  }
  return out;
}

}  // namespace mop
