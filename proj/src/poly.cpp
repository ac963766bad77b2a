#include "mop/poly.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <stdexcept>

namespace mop {

Real eval(const Poly& p, const Real& x) {
  Real s = 0;
  for (size_t i = p.size(); i-- > 0;) s = s * x + p[i];
  return s;
}

Cx eval(const Poly& p, const Cx& z) {
  Cx s(Real(0), Real(0));
  for (size_t i = p.size(); i-- > 0;) s = s * z + p[i];
  return s;
}

Poly derivative(const Poly& p) {
  if (p.size() <= 1) return Poly{Real(0)};
  Poly d(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<int>(i);
  return d;
}

Poly from_roots(const std::vector<Real>& roots) {
  Poly p{Real(1)};
  for (const Real& r : roots) {
    Poly q(p.size() + 1, Real(0));
    for (size_t i = 0; i < p.size(); ++i) {
      q[i + 1] += p[i];
      q[i] -= r * p[i];
    }
    p = std::move(q);
  }
  return p;
}

namespace {

std::vector<std::complex<double>> companion_seeds(const Poly& p) {
  const int n = static_cast<int>(p.size()) - 1;
  double lead = to_double(p.back());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) m(i, n - 1) = -to_double(p[i]) / lead;
  // Parlett-Reinsch diagonal balancing.
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double c = 0, r = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(m(j, i));
        r += std::abs(m(i, j));
      }
      if (c == 0 || r == 0) continue;
      double f = 1.0, s = c + r;
      while (c < r / 2) { c *= 2; r /= 2; f *= 2; }
      while (c >= r * 2) { c /= 2; r *= 2; f /= 2; }
      if ((c + r) < 0.95 * s) {
        done = false;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  std::vector<std::complex<double>> out(n);
  for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

}  // namespace

RootResult real_roots(const Poly& p) {
  RootResult res{{}, Real(0), Real(0)};
  const int n = static_cast<int>(p.size()) - 1;
  if (n < 1) return res;
  if (p.back() == 0) throw std::invalid_argument("real_roots: zero leading coefficient");

  auto seeds = companion_seeds(p);
  std::vector<Cx> z(n);
  for (int i = 0; i < n; ++i) {
    // Nudge off the real axis so conjugate-symmetric stalls cannot occur.
    z[i] = Cx(Real(seeds[i].real()), Real(seeds[i].imag()) + Real(1e-3) * (i + 1) / n);
  }
  Poly dp = derivative(p);
  const int bits = precision_bits();
  Real tol = epsilon_bits(bits - 12);
  // Once in the quadratic regime, a stalled step means roundoff has been reached.
  Real stall = epsilon_bits(bits / 2);
  Real prev = 1;
  for (int it = 0; it < 500; ++it) {
    Real worst = 0;
    for (int i = 0; i < n; ++i) {
      Cx ratio = eval(p, z[i]) / eval(dp, z[i]);
      Cx sum(Real(0), Real(0));
      for (int j = 0; j < n; ++j) {
        if (j != i) sum += Cx(Real(1)) / (z[i] - z[j]);
      }
      Cx step = ratio / (Cx(Real(1)) - ratio * sum);
      z[i] -= step;
      Real mag = abs(step) / (1 + abs(z[i]));
      if (mag > worst) worst = mag;
    }
    if (worst < tol || (worst < stall && worst > prev / 2)) break;
    prev = worst;
  }
  for (int i = 0; i < n; ++i) {
    Real im = abs(z[i].im);
    if (im > res.max_imag) res.max_imag = im;
    Real x = z[i].re;
    for (int it = 0; it < 8; ++it) {
      Real d = eval(dp, x);
      if (d == 0) break;
      Real step = eval(p, x) / d;
      x -= step;
      if (abs(step) <= tol * (1 + abs(x))) break;
    }
    res.roots.push_back(x);
  }
  std::sort(res.roots.begin(), res.roots.end());
  if (n >= 2) {
    res.min_gap = res.roots[1] - res.roots[0];
    for (int i = 2; i < n; ++i) {
      Real gap = res.roots[i] - res.roots[i - 1];
      if (gap < res.min_gap) res.min_gap = gap;
    }
  }
  return res;
}

}  // namespace mop
