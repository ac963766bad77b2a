#include "mop/equilibrium.hpp"

#include "mop/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mop {

namespace {

constexpr double kC11 = 1.0, kC12 = -0.25, kC22 = 0.25;

// Re(u log u - u); the arg term vanishes whenever u is real, so the branch of
// log never matters.
double G(std::complex<double> u) {
  const double r = std::abs(u);
  if (r == 0) return 0;
  return u.real() * std::log(r) - u.imag() * std::arg(u) - u.real();
}

// (1/h) int_{c0}^{c1} log(1/|z - t|) dt. The G difference cancels badly once
// |z - mid| >> h, so far cells use the even-moment series of log(1 - s/(z - mid)).
double cell_log(std::complex<double> z, double c0, double c1) {
  const double h = c1 - c0;
  const std::complex<double> d = z - (c0 + c1) / 2;
  const std::complex<double> x = (h / 2) / d;
  if (std::abs(x) > 0.1) return -(G(z - c0) - G(z - c1)) / h;
  const std::complex<double> x2 = x * x;
  std::complex<double> xk = x2, corr = 0;
  for (int k = 2; k <= 14; k += 2, xk *= x2) corr += xk / double(k * (k + 1));
  return -(std::log(std::abs(d)) - corr.real());
}

// Euclidean projection onto the probability simplex.
void project_simplex(double* v, int n) {
  std::vector<double> s(v, v + n);
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0, theta = 0;
  for (int k = 0; k < n; ++k) {
    cum += s[k];
    double t = (cum - 1) / (k + 1);
    if (s[k] - t > 0) theta = t;
  }
  for (int k = 0; k < n; ++k) v[k] = std::max(0.0, v[k] - theta);
}

}  // namespace

double DiscreteMeasure::mass() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

double DiscreteMeasure::cdf(double x) const {
  double out = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (edges.empty()) {
      if (nodes[i] <= x) out += weights[i];
      continue;
    }
    const double c0 = edges[i], c1 = edges[i + 1];
    if (x >= c1) out += weights[i];
    else if (x > c0) out += weights[i] * (x - c0) / (c1 - c0);
  }
  return out;
}

std::pair<double, double> DiscreteMeasure::support(double threshold) const {
  const double mx = *std::max_element(weights.begin(), weights.end());
  int first = -1, last = -1;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > threshold * mx) {
      if (first < 0) first = static_cast<int>(i);
      last = static_cast<int>(i);
    }
  }
  if (edges.empty()) return {nodes[first], nodes[last]};
  return {edges[first], edges[last + 1]};
}

DiscreteMeasure chebyshev_cells(double lo, double hi, int N) {
  if (N < 1 || !(hi > lo)) throw std::invalid_argument("chebyshev_cells needs N >= 1 and lo < hi");
  DiscreteMeasure m;
  m.lo = lo;
  m.hi = hi;
  for (int k = 0; k <= N; ++k) m.edges.push_back(lo + (hi - lo) * (1 - std::cos(M_PI * k / N)) / 2);
  m.edges.front() = lo;
  m.edges.back() = hi;
  for (int k = 0; k < N; ++k) m.nodes.push_back((m.edges[k] + m.edges[k + 1]) / 2);
  m.weights.assign(N, 1.0 / N);
  return m;
}

double potential(const DiscreteMeasure& mu, std::complex<double> z) {
  double v = 0;
  for (size_t i = 0; i < mu.weights.size(); ++i) {
    if (mu.weights[i] == 0) continue;
    if (mu.edges.empty()) {
      const double d = std::abs(z - mu.nodes[i]);
      if (d == 0) throw std::domain_error("potential evaluated at an atom");
      v -= mu.weights[i] * std::log(d);
    } else {
      v += mu.weights[i] * cell_log(z, mu.edges[i], mu.edges[i + 1]);
    }
  }
  return v;
}

EquilibriumSolution solve_equilibrium(double alpha3, double a3, double b3, int N, const std::vector<double>& start) {
  if (N < 50) throw std::invalid_argument("solve_equilibrium needs N >= 50");
  if (!start.empty() && static_cast<int>(start.size()) != 2 * N)
    throw std::invalid_argument("solve_equilibrium start must hold 2N weights");
  EquilibriumSolution sol;
  sol.mu1 = chebyshev_cells(0, alpha3, N);
  sol.mu2 = chebyshev_cells(-b3, -a3, N);
  const int n = 2 * N;

  // Collocation of cell densities at cell midpoints, symmetrized so that the
  // discrete energy is a quadratic form: E(w) = w^T Q w / 2, gradient Qw = 2W.
  const DiscreteMeasure* m[2] = {&sol.mu1, &sol.mu2};
  const double c[2][2] = {{kC11, kC12}, {kC12, kC22}};
  Eigen::MatrixXd K(n, n);
  for (int bi = 0; bi < 2; ++bi)
    for (int bj = 0; bj < 2; ++bj)
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
          K(bi * N + i, bj * N + j) = cell_log(m[bi]->nodes[i], m[bj]->edges[j], m[bj]->edges[j + 1]);
  Eigen::MatrixXd Q = K + K.transpose();
  for (int bi = 0; bi < 2; ++bi)
    for (int bj = 0; bj < 2; ++bj) Q.block(bi * N, bj * N, N, N) *= c[bi][bj];

  Eigen::VectorXd w(n);
  w.setConstant(1.0 / N);
  if (!start.empty()) {
    std::copy(start.begin(), start.end(), w.data());
    project_simplex(w.data(), N);
    project_simplex(w.data() + N, N);
  }
  auto energy = [&](const Eigen::VectorXd& x) { return 0.5 * x.dot(Q * x); };

  // Phase 1: projected gradient with step 1/|Q|_2.
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  double L = 1;
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd y = Q * v;
    L = y.norm() / v.norm();
    v = y / y.norm();
  }
  double E = energy(w);
  sol.energy_trace.push_back(E);
  for (int it = 0; it < 2000; ++it) {
    Eigen::VectorXd y = w - Q * w / L;
    project_simplex(y.data(), N);
    project_simplex(y.data() + N, N);
    const double En = energy(y);
    if (!(En < E)) break;
    w = y;
    sol.energy_trace.push_back(En);
    ++sol.pg_iterations;
    const bool done = E - En <= 1e-15 * std::abs(E);
    E = En;
    if (done) break;
  }

  // Phase 2: primal active set on {w >= 0, sum per interval = 1}.
  std::vector<char> passive(n);
  for (int i = 0; i < n; ++i) passive[i] = w[i] > 0;
  double nu[2] = {0, 0};
  auto solve_eqp = [&](Eigen::VectorXd& s) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (passive[i]) idx.push_back(i);
    const int p = static_cast<int>(idx.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p + 2, p + 2);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p + 2);
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) A(a, b) = Q(idx[a], idx[b]);
      const int blk = idx[a] >= N;
      A(a, p + blk) = -1;
      A(p + blk, a) = 1;
    }
    rhs[p] = rhs[p + 1] = 1;
    Eigen::VectorXd x = A.partialPivLu().solve(rhs);
    s.setZero(n);
    for (int a = 0; a < p; ++a) s[idx[a]] = x[a];
    nu[0] = x[p];
    nu[1] = x[p + 1];
  };

  bool settled = false;
  Eigen::VectorXd s(n);
  for (int outer = 0; outer < 4 * n && !settled; ++outer) {
    for (int inner = 0; inner <= n; ++inner) {
      solve_eqp(s);
      double alpha = 1;
      int hit = -1;
      for (int i = 0; i < n; ++i) {
        if (passive[i] && s[i] <= 0) {
          double t = w[i] / (w[i] - s[i]);
          if (t < alpha) {
            alpha = t;
            hit = i;
          }
        }
      }
      w += alpha * (s - w);
      ++sol.active_set_iterations;
      sol.energy_trace.push_back(energy(w));
      if (hit < 0) break;
      for (int i = 0; i < n; ++i)
        if (passive[i] && (i == hit || w[i] <= 0)) {
          passive[i] = 0;
          w[i] = 0;
        }
    }
    const Eigen::VectorXd g = Q * w;
    const double tol = 1e-10 * g.cwiseAbs().maxCoeff();
    int best = -1;
    double worst = -tol;
    for (int i = 0; i < n; ++i) {
      if (passive[i]) continue;
      double r = g[i] - nu[i >= N];
      if (r < worst) {
        worst = r;
        best = i;
      }
    }
    if (best < 0) settled = true;
    else passive[best] = 1;
  }
  if (!settled) {
    throw NumericalError("equilibrium active set did not settle after " + std::to_string(sol.active_set_iterations) +
                         " steps; last energy " + std::to_string(sol.energy_trace.back()));
  }

  for (int i = 0; i < N; ++i) {
    sol.mu1.weights[i] = std::max(0.0, w[i]);
    sol.mu2.weights[i] = std::max(0.0, w[N + i]);
  }
  sol.energy = energy(w);
  const Eigen::VectorXd W = Q * w / 2;
  sol.W1.assign(W.data(), W.data() + N);
  sol.W2.assign(W.data() + N, W.data() + n);
  sol.omega1 = *std::min_element(sol.W1.begin(), sol.W1.end());
  sol.omega2 = *std::min_element(sol.W2.begin(), sol.W2.end());
  auto profile = [](const DiscreteMeasure& mu, const std::vector<double>& Wj, double om, double& res, double& gap) {
    const double mx = *std::max_element(mu.weights.begin(), mu.weights.end());
    res = 0;
    gap = 0;
    bool any_off = false;
    for (size_t i = 0; i < Wj.size(); ++i) {
      if (mu.weights[i] > 1e-12 * mx) {
        res = std::max(res, std::abs(Wj[i] - om));
      } else {
        gap = any_off ? std::min(gap, Wj[i] - om) : Wj[i] - om;
        any_off = true;
      }
    }
  };
  profile(sol.mu1, sol.W1, sol.omega1, sol.support_residual1, sol.offsupport_gap1);
  profile(sol.mu2, sol.W2, sol.omega2, sol.support_residual2, sol.offsupport_gap2);
  return sol;
}

EquilibriumSolution solve_equilibrium(const StarConfig& cfg, int N) {
  cfg.validate();
  auto cube = [](const Real& x) { return to_double(x * x * x); };
  return solve_equilibrium(cube(cfg.alpha_value()), cube(cfg.a_value()), cube(cfg.b_value()), N);
}

std::vector<PotentialIdentity> check_potential_ratio_identity(const RiemannSurface& surf, const ALimits& a,
                                                              const EquilibriumSolution& sol,
                                                              const std::vector<Cx>& points) {
  std::vector<PotentialIdentity> out;
  for (const Cx& z : points) {
    PotentialIdentity r;
    r.z = to_std(z);
    double s1 = 0, s2 = 0;
    for (int i = 0; i < 6; ++i) {
      s1 += std::log(to_double(abs(surf.limiting_F(i, 1, z, a))));
      s2 += std::log(to_double(abs(surf.limiting_F(i, 2, z, a))));
    }
    r.residual1 = potential(sol.mu1, r.z) + s1 / 2;
    r.residual2 = potential(sol.mu2, r.z) + s2;
    out.push_back(r);
  }
  return out;
}

}  // namespace mop
