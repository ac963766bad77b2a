#include "mop/errors.hpp"
#include "mop/riemann_surface.hpp"

#include <gtest/gtest.h>

using namespace mop;

namespace {

struct Env {
  Env() { set_precision_bits(256); }
};
const Env env;

const RiemannSurface& r1() {
  static const RiemannSurface s(reference_r1());
  return s;
}
const RiemannSurface& r0() {
  static const RiemannSurface s(reference_r0());
  return s;
}

Real rel(const Cx& x, const Cx& y) { return abs(x - y) / abs(y); }

}  // namespace

TEST(BetaGamma, SymmetricCaseMatchesBisectionOracle) {
  // lambda = mu kills the first equation through its factor (beta + gamma);
  // with gamma = -beta the second reduces to 4(l+m)^2 beta^6 = (3-beta^2)^3 (1+beta^2).
  const Real lm = 6;
  auto f = [&](const Real& b) {
    Real b2 = b * b;
    return 4 * lm * lm * b2 * b2 * b2 - (3 - b2) * (3 - b2) * (3 - b2) * (1 + b2);
  };
  Real lo = 0, hi = 1;
  ASSERT_LT(f(lo), 0);
  ASSERT_GT(f(hi), 0);
  for (int it = 0; it < 200; ++it) {
    Real mid = (lo + hi) / 2;
    (f(mid) < 0 ? lo : hi) = mid;
  }
  const SurfaceModel& m = r0().model();
  EXPECT_LT(abs(m.beta - lo), Real(1e-20));
  EXPECT_LT(abs(m.gamma + m.beta), Real(1e-20));
}

TEST(BetaGamma, AsymmetricCaseResidualsAndOrdering) {
  const SurfaceModel& m = r1().model();
  EXPECT_EQ(m.lambda, 15);
  EXPECT_EQ(m.mu, 3);
  EXPECT_LT(m.residual1, Real(1e-30));
  EXPECT_LT(m.residual2, Real(1e-30));
  EXPECT_TRUE(-1 < m.gamma && m.gamma < m.beta && m.beta < 1);
  EXPECT_TRUE(m.c < -1 && m.d > 1);
  // Frozen from an independent mpmath findroot run at 50 digits.
  EXPECT_LT(abs(m.beta - parse_real("0.16945558147221566019")), Real(1e-19));
  EXPECT_LT(abs(m.gamma - parse_real("-0.85572202116977908503")), Real(1e-19));
}

TEST(BetaGamma, RejectsDegenerateParameters) {
  EXPECT_THROW(solve_beta_gamma(Real(1), Real(3)), HypothesisViolation);
}

TEST(Branches, CubicResidualProductAndSum) {
  for (const RiemannSurface* s : {&r1(), &r0()}) {
    const SurfaceModel& m = s->model();
    EXPECT_EQ(m.C_prod, 2 * m.theta1 / (m.H_beta * m.H_beta * m.H_beta));
    const Real tol = pow10_neg(precision_bits() / 4);
    for (const Cx& z : s->sample_points(100)) {
      auto w = s->eval_branches(z);
      for (const Cx& x : w) EXPECT_LT(s->cubic_residual(z, x), tol);
      EXPECT_LT(rel(w[0] * w[1] * w[2], Cx(m.C_prod)), Real(1e-25));
      auto [p, q] = s->pq(z);
      EXPECT_LT(abs(w[0] + w[1] + w[2] + p), Real(1e-25) * (1 + abs(p)));
      auto u = s->normalized_branches(z);
      EXPECT_LT(abs(u[0] * u[1] * u[2] - Real(1)), Real(1e-25));
    }
  }
}

TEST(Branches, AsymptoticLabels) {
  const SurfaceModel& m = r1().model();
  const Cx z(Real(1e6));
  auto w = r1().eval_branches(z);
  EXPECT_LT(rel(w[1], z * Real(-2 / m.a3)), Real(1e-4));
  EXPECT_LT(rel(w[2], Cx(m.B) / z), Real(1e-4));
  EXPECT_LT(rel(w[0], Cx(m.psi0_inf)), Real(1e-4));
  // Continuation must agree with matching far out in every direction.
  const Cx zc(Real(-3e5), Real(4e5));
  auto wc = r1().eval_branches(zc);
  EXPECT_LT(rel(wc[1], zc * Real(-2 / m.a3)), Real(1e-4));
  EXPECT_LT(rel(wc[2], Cx(m.B) / zc), Real(1e-4));
}

TEST(Branches, ConjugateSymmetry) {
  for (const Cx& z : r1().sample_points(30)) {
    auto w = r1().eval_branches(z);
    auto wc = r1().eval_branches(conj(z));
    for (int k = 0; k < 3; ++k) EXPECT_LT(abs(wc[k] - conj(w[k])), Real(1e-40) * (1 + abs(w[k])));
  }
}

TEST(Branches, BoundaryPairingAcrossCuts) {
  // On Delta_1 psi_0 and psi_1 swap-conjugate; on Delta_2 psi_1 and psi_2.
  const SurfaceModel& m = r1().model();
  const Real e(1e-8);
  for (int cut = 0; cut < 2; ++cut) {
    const Real lo = cut == 0 ? Real(0) : Real(-m.b3), hi = cut == 0 ? m.alpha3 : Real(-m.a3);
    for (int j = 1; j < 10; ++j) {
      Real x = lo + (hi - lo) * j / 10;
      auto up = r1().eval_branches(Cx(x, e));
      auto dn = r1().eval_branches(Cx(x, Real(-e)));
      const int k = cut;
      EXPECT_LT(abs(up[k] - conj(dn[k])), Real(1e-6) * (1 + abs(up[k])));
      EXPECT_LT(abs(up[k] - conj(up[k + 1])), Real(1e-6) * (1 + abs(up[k])));
      EXPECT_GT(abs(up[k].im), Real(1e-6));  // genuinely complex inside the cut
    }
  }
}

TEST(Branches, RefusesBranchPointsAndCuts) {
  const SurfaceModel& m = r1().model();
  EXPECT_THROW(r1().eval_branches(Cx(m.alpha3)), NumericalError);
  EXPECT_THROW(r1().eval_branches(Cx(Real(-m.a3) + Real(1e-14))), NumericalError);
  EXPECT_THROW(r1().eval_branches(Cx(Real("0.5"))), NumericalError);
  EXPECT_THROW(r1().eval_branches(Cx(Real(-5))), NumericalError);
  EXPECT_NO_THROW(r1().eval_branches(Cx(Real("-0.5"))));  // gap between the cuts
}

TEST(Limits, ClosedFormLimitsAndGap) {
  for (const RiemannSurface* s : {&r1(), &r0()}) {
    const ALimits a = s->closed_form_limits();
    const Real D = s->delta_a();
    EXPECT_GT(D, 0);
    EXPECT_LT(abs(a.a0 - a.a3 - D), Real(1e-60));
    EXPECT_LT(abs(a.a4 - a.a1 - D), Real(1e-60));
    EXPECT_GT(a.a4, a.a1);
  }
  // Frozen from the mpmath prototype of the same construction.
  const ALimits a = r1().closed_form_limits();
  EXPECT_LT(abs(a.a0 - parse_real("0.24597403985853692878")), Real(1e-19));
  EXPECT_LT(abs(a.a1 - parse_real("0.0043769924973531012332")), Real(1e-19));
}

TEST(Limits, LaurentCoefficientsAtInfinity) {
  const RiemannSurface& s = r1();
  const ALimits a = s.closed_form_limits();
  const Cx z(Real(1e12));
  // psi~_0 = 1 + (a0 - a3)/z + ..., with a0 - a3 = delta_a in closed form.
  auto u = s.normalized_branches(z);
  EXPECT_LT(abs((u[0] - Real(1)) * z - s.delta_a()) / s.delta_a(), Real(1e-9));
  // The recurrence gives P_{6k+1} = P_{6k} - a_{6k} P_{6k-2}, so F~_1^(0) = 1 - a0/z + ...
  Cx F0 = s.limiting_F(0, 1, z, a);
  EXPECT_LT(abs((F0 - Real(1)) * z + a.a0) / a.a0, Real(1e-9));
  // Leading behaviour of every limit function.
  for (int i = 0; i < 6; ++i) {
    Cx f1 = s.limiting_F(i, 1, z, a), f2 = s.limiting_F(i, 2, z, a);
    Cx lead1 = (i == 2 || i == 5) ? z : Cx(Real(1));
    Cx lead2 = (i == 3 || i == 5) ? z : (i == 4 ? Cx(Real(1)) / z : Cx(Real(1)));
    EXPECT_LT(rel(f1, lead1), Real(1e-9)) << i;
    EXPECT_LT(rel(f2, lead2), Real(1e-9)) << i;
  }
}

TEST(Limits, ShiftRelationsHoldExactly) {
  const RiemannSurface& s = r0();
  const ALimits a = s.closed_form_limits();
  for (const Cx& z : s.sample_points(10)) {
    EXPECT_LT(rel(s.limiting_F(2, 1, z, a), z * s.limiting_F(0, 1, z, a)), Real(1e-60));
    EXPECT_LT(rel(s.limiting_F(5, 1, z, a), z * s.limiting_F(3, 1, z, a)), Real(1e-60));
    auto u = s.normalized_branches(z);
    EXPECT_LT(rel(s.limiting_F(0, 1, z, a) / s.limiting_F(3, 1, z, a), Cx(Real(1)) / u[0]), Real(1e-60));
    EXPECT_LT(rel(s.limiting_F(0, 2, z, a) / s.limiting_F(3, 2, z, a), u[2]), Real(1e-60));
  }
}

TEST(Limits, RejectsInconsistentInputs) {
  ALimits a = r1().closed_form_limits();
  std::swap(a.a1, a.a4);
  EXPECT_THROW(r1().limiting_F(0, 1, Cx(Real(2)), a), std::invalid_argument);
}

TEST(BoundaryLaws, AllTwelveConstantWithMatchingOmegas) {
  for (const RiemannSurface* s : {&r1(), &r0()}) {
    const ALimits a = s->closed_form_limits();
    const auto w1 = RiemannSurface::omega1(a);
    std::array<Real, 6> w2;
    for (int family = 1; family <= 2; ++family) {
      for (int l = 0; l < 6; ++l) {
        BoundaryLaw law = s->boundary_law(family, l, a);
        EXPECT_LT(law.max_rel_dev, Real(1e-6)) << family << ' ' << l;
        EXPECT_GT(law.constant, 0);
        if (family == 1) EXPECT_LT(abs(1 / law.constant - w1[l]) / w1[l], Real(1e-6)) << l;
        if (family == 2) w2[l] = 1 / law.constant;
      }
    }
    EXPECT_LT(abs(w2[0] * w2[1] / (w2[3] * w2[4]) - 1), Real(1e-6));
    EXPECT_LT(abs(w2[0] / w2[2] - 1), Real(1e-6));
    EXPECT_LT(abs(w2[3] / w2[5] - 1), Real(1e-6));
  }
}

TEST(BoundaryLaws, PerturbedLimitsBreakConstancy) {
  // The laws pin the individual limits, not only their differences.
  ALimits a = r1().closed_form_limits();
  a.a3 *= Real("1.01");
  a.a0 = a.a3 + r1().delta_a();
  EXPECT_GT(r1().boundary_law(1, 0, a).max_rel_dev, Real(1e-4));
}
