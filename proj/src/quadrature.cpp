#include "mop/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>

#include <stdexcept>

namespace mop {

namespace {

// Recurrence of the orthonormal Jacobi polynomials: diag[k], off[k] = b_k (k >= 1).
template <class T>
void jacobi_matrix(int n, const T& a, const T& b, std::vector<T>& diag, std::vector<T>& off) {
  using std::sqrt;
  diag.assign(n, T(0));
  off.assign(n + 1, T(0));
  T ab = a + b;
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      diag[k] = (b - a) / (ab + 2);
    } else {
      T s = 2 * k + ab;
      diag[k] = (b * b - a * a) / (s * (s + 2));
    }
  }
  for (int k = 1; k <= n; ++k) {
    T s = 2 * k + ab;
    if (k == 1) {
      // (k + ab) / (s - 1) cancels; needed when a + b = -1.
      off[k] = sqrt(4 * (1 + a) * (1 + b) / (s * s * (s + 1)));
      continue;
    }
    T num = 4 * T(k) * (k + a) * (k + b) * (k + ab);
    T den = s * s * (s + 1) * (s - 1);
    off[k] = sqrt(num / den);
  }
}

}  // namespace

QuadRule gauss_jacobi(int n, const Real& a, const Real& b) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be positive");
  if (!(a > -1) || !(b > -1)) throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");

  std::vector<double> dd, od;
  jacobi_matrix<double>(n, to_double(a), to_double(b), dd, od);
  Eigen::VectorXd diag(n), sub(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) diag(k) = dd[k];
  for (int k = 1; k < n; ++k) sub(k - 1) = od[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  Eigen::VectorXd seeds = es.eigenvalues();

  std::vector<Real> D, O;
  jacobi_matrix<Real>(n, a, b, D, O);
  Real mu0 = pow(Real(2), a + b + 1) * boost::math::tgamma(a + 1) * boost::math::tgamma(b + 1) /
             boost::math::tgamma(a + b + 2);
  Real p0 = 1 / sqrt(mu0);
  const int bits = precision_bits();
  Real tol = epsilon_bits(bits - 8);

  QuadRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    Real x = seeds(i);
    for (int it = 0; it < 60; ++it) {
      Real pm1 = 0, p = p0, dpm1 = 0, dp = 0;
      for (int k = 0; k < n; ++k) {
        Real pn = ((x - D[k]) * p - O[k] * pm1) / O[k + 1];
        Real dpn = (p + (x - D[k]) * dp - O[k] * dpm1) / O[k + 1];
        pm1 = p;
        p = pn;
        dpm1 = dp;
        dp = dpn;
      }
      Real step = p / dp;
      x -= step;
      if (abs(step) < tol) break;
    }
    Real pm1 = 0, p = p0, sum = p0 * p0;
    for (int k = 0; k + 1 < n; ++k) {
      Real pn = ((x - D[k]) * p - O[k] * pm1) / O[k + 1];
      pm1 = p;
      p = pn;
      sum += p * p;
    }
    rule.x[i] = x;
    rule.w[i] = 1 / sum;
  }
  for (int i = 1; i < n; ++i) {
    if (!(rule.x[i] > rule.x[i - 1])) throw std::runtime_error("gauss_jacobi: Newton refinement merged nodes");
  }
  return rule;
}

}  // namespace mop
