#include "mop/asymptotics.hpp"
#include "mop/riemann_surface.hpp"

#include <gtest/gtest.h>

#include <complex>

using namespace mop;

namespace {

struct Fixture {
  StarConfig cfg = reference_r1();
  Weights w;
  MopSystem sys;
  SecondKind sk;
  Asymptotics as;
  RiemannSurface surf;
  ALimits a;
  explicit Fixture(int bits)
      : w((set_precision_bits(bits), cfg)), sys(w, cfg.n_max), sk(sys), as(sk), surf(cfg), a(surf.closed_form_limits()) {}
};

const Fixture& fx() {
  static const Fixture f(256);
  return f;
}

std::array<Real, 6> a_hat(int k_tail) {
  std::array<Real, 6> out;
  auto est = fx().as.estimate_all(k_tail);
  for (int i = 0; i < 6; ++i) out[i] = est[i].value;
  return out;
}

Cx cbrt_principal(const Cx& z) {
  auto zd = to_std(z);
  Cx u = from_std(std::polar(std::cbrt(std::abs(zd)), std::arg(zd) / 3));
  for (int it = 0; it < 8; ++it) u = u - (u * u * u - z) / (Real(3) * u * u);
  return u;
}

}  // namespace

TEST(TailEstimates, OrderingAndSumRelation) {
  auto a = a_hat(9);
  Real mx = *std::max_element(a.begin(), a.end());
  EXPECT_GT(a[4], a[1]);
  EXPECT_LT(abs(a[0] + a[1] - a[3] - a[4]), Real(1e-2) * mx);
  auto est = fx().as.estimate_all(9);
  for (const auto& e : est) {
    EXPECT_EQ(e.k_last, 9);
    EXPECT_GT(e.error_proxy, 0);
    EXPECT_LT(e.error_proxy, Real(1e-2) * mx);
  }
}

TEST(TailEstimates, ApproachSurfaceLimits) {
  auto h = a_hat(9);
  const ALimits& a = fx().a;
  EXPECT_LT(abs(h[0] - a.a0) / a.a0, Real(2e-2));
  EXPECT_LT(abs(h[3] - a.a3) / a.a3, Real(2e-2));
  EXPECT_LT(abs(h[4] - a.a4) / a.a4, Real(2e-2));
  EXPECT_LT(abs(h[1] - a.a1) / a.a1, Real(2e-2));
  const Real D = fx().surf.delta_a();
  EXPECT_LT(abs(D - (h[0] - h[3])) / D, Real(2e-2));
  EXPECT_LT(abs(D - (h[4] - h[1])) / D, Real(2e-2));
}

TEST(TailEstimates, RejectsShortSequences) {
  EXPECT_THROW(fx().as.estimate_limit_a(0, 2), std::invalid_argument);
}

TEST(Ratios, RelationResidualsOnTestSet) {
  auto a = a_hat(9);
  auto Z = fx().as.test_set();
  ASSERT_EQ(Z.size(), 8u);
  for (const Cx& z : Z)
    for (const auto& r : fx().as.relation_residuals(z, a)) EXPECT_LT(r.residual, Real(1e-2)) << r.name << " at " << to_std(z);
}

TEST(Ratios, SixDistinctLimits) {
  auto rep = fx().as.distinctness(Cx(Real(2)));
  EXPECT_TRUE(rep.ok);
  EXPECT_GT(rep.min_ratio, 1);
}

TEST(Ratios, ConvergeToClosedForms) {
  for (const Cx& z : {Cx(Real(2)), Cx(Real(-3), Real(1))}) {
    for (int family = 1; family <= 2; ++family) {
      for (int i = 0; i < 6; ++i) {
        auto seq = fx().as.ratio_sequence(i, family, z);
        Cx F = fx().surf.limiting_F(i, family, z, fx().a);
        EXPECT_LT(abs(seq.last() - F) / abs(F), Real(1e-2)) << family << ' ' << i;
      }
    }
  }
}

TEST(Ratios, GRatioLawFromSequences) {
  const Cx z(Real(-3), Real(1));
  const int k = fx().as.k_max(3);
  auto u = fx().surf.normalized_branches(z);
  Cx g1 = fx().as.ratio(0, 1, k, z) / fx().as.ratio(3, 1, k, z);
  Cx g2 = fx().as.ratio(0, 2, k, z) / fx().as.ratio(3, 2, k, z);
  EXPECT_LT(abs(g1 * u[0] - Real(1)), Real(1e-2));
  EXPECT_LT(abs(g2 / u[2] - Real(1)), Real(1e-2));
}

TEST(Ratios, SecondTypeRatiosMatchSurface) {
  const auto w1 = RiemannSurface::omega1(fx().a);
  for (const Cx& z : {Cx(Real(2)), Cx(Real(-3), Real(1))}) {
    Cx u = cbrt_principal(z);
    for (int i = 0; i < 6; ++i) {
      Cx q = fx().surf.limiting_F(i, 2, z, fx().a) / fx().surf.limiting_F(i, 1, z, fx().a) / w1[i];
      Cx lim = (i == 0 || i == 3) ? q / (u * u) : u * q;
      Cx r = fx().as.ratio(i, 3, fx().as.k_max(i), z);
      EXPECT_LT(abs(r - lim) / abs(lim), Real(2e-2)) << i;
    }
  }
}

TEST(Ratios, KappaRatiosApproachSqrtOmega) {
  const auto w1 = RiemannSurface::omega1(fx().a);
  for (int i = 0; i < 6; ++i) {
    Real w2 = 1 / fx().surf.boundary_law(2, i, fx().a).constant;
    const int k = fx().as.k_max(i);
    EXPECT_LT(abs(fx().as.kappa_ratio(i, 1, k) / sqrt(w1[i]) - 1), Real(1e-2)) << i;
    EXPECT_LT(abs(fx().as.kappa_ratio(i, 2, k) / sqrt(w2) - 1), Real(1e-2)) << i;
  }
}

TEST(Ratios, BadFamilyRejected) {
  EXPECT_THROW(fx().as.ratio(0, 4, 1, Cx(Real(2))), std::invalid_argument);
}

TEST(Zeros, StarZerosPerRay) {
  for (int k = 1; k <= 20; ++k) {
    auto z = fx().as.star_zeros_1(3 * k);
    ASSERT_EQ(static_cast<int>(z.size()), k);
    for (const Real& x : z) EXPECT_TRUE(x > 0 && x < fx().w.alpha());
  }
}

TEST(Zeros, KolmogorovDistanceOfPointMassCdf) {
  // A CDF that jumps past every zero at once is maximally far: distance 1.
  auto d = fx().as.kolmogorov_distance(30, [](double) { return 0.0; });
  EXPECT_EQ(d, 1);
}
