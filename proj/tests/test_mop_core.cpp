#include "mop/mop_core.hpp"

#include <gtest/gtest.h>

using mop::Real;

namespace {

mop::StarConfig small_r1(int n_max) {
  auto c = mop::reference_r1();
  c.n_max = n_max;
  c.quad_points = 2 * n_max + 64;
  return c;
}

}  // namespace

TEST(Conditions, CountIsFloorNOverThree) {
  for (int n = 0; n <= 240; ++n) {
    auto c = mop::defining_conditions(n);
    EXPECT_EQ(static_cast<int>(c.size()), n / 3) << n;
    // Distinct test functions.
    for (size_t i = 0; i < c.size(); ++i)
      for (size_t k = i + 1; k < c.size(); ++k)
        EXPECT_FALSE(c[i].family == c[k].family && c[i].j == c[k].j) << n;
  }
}

TEST(Conditions, SmallIndicesByHand) {
  auto c3 = mop::defining_conditions(3);
  ASSERT_EQ(c3.size(), 1u);
  EXPECT_EQ(c3[0].family, mop::WeightId::A);
  EXPECT_EQ(c3[0].j, 0);
  // n = 4 (r = 1): s1 exponents k + 1 in {1, 2, 3} keep k = 2 -> tau^1; f family k in {0, 1}
  // needs k + 3 = 0 mod 3 -> k = 0 -> tau^0 against Af.
  auto c4 = mop::defining_conditions(4);
  ASSERT_EQ(c4.size(), 1u);
  EXPECT_EQ(c4[0].family, mop::WeightId::Af);
  EXPECT_EQ(c4[0].j, 0);
}

TEST(MopCore, LowDegreeClosedForms) {
  mop::PrecisionGuard g(256);
  auto cfg = small_r1(12);
  mop::Weights w(cfg);
  mop::MopSystem sys(w, 12);
  // int (tau - c) tau^{-2/3} dtau = 0 on (0,1) gives c = (3/4)/3.
  const auto& p3 = sys.P(3).coeffs;
  ASSERT_EQ(p3.size(), 2u);
  EXPECT_LT(abs(p3[0] + Real(1) / 4), Real("1e-70"));
  // z Q_2 = Q_3 + a_2 Q_0 with Q_2 = z^2, Q_3 = z^3 - 1/4.
  EXPECT_LT(abs(sys.a(2) - Real(1) / 4), Real("1e-70"));
  EXPECT_LT(sys.recurrence(2).route_disagreement, Real("1e-60"));
}

TEST(MopCore, RecurrenceAndConditionsHoldToWorkingPrecision) {
  mop::PrecisionGuard g(256);
  auto cfg = small_r1(45);
  mop::Weights w(cfg);
  mop::MopSystem sys(w, 45);
  EXPECT_LT(sys.max_condition_residual(), Real("1e-50"));
  EXPECT_LT(sys.max_recurrence_residual(), Real("1e-50"));
  EXPECT_LT(sys.max_route_disagreement(), Real("1e-40"));
  for (int n = 2; n <= 45; ++n) EXPECT_GT(sys.a(n), 0) << n;
}

TEST(MopCore, ZerosAreRealSimpleInsideAndInterlace) {
  mop::PrecisionGuard g(256);
  auto cfg = small_r1(45);
  mop::Weights w(cfg);
  mop::MopSystem sys(w, 45);
  for (int n = 0; n <= 46; ++n) {
    const auto& p = sys.P(n);
    ASSERT_EQ(static_cast<int>(p.roots.size()), n / 3);
    for (const auto& x : p.roots) {
      EXPECT_GT(x, 0);
      EXPECT_LT(x, w.alpha3());
    }
  }
  for (int n = 0; n <= 45; ++n) {
    auto rep = sys.check_interlacing(n);
    EXPECT_TRUE(rep.ok()) << n << (rep.violations.empty() ? "" : ": " + rep.violations.front());
  }
}

TEST(MopCore, JacobiWeightsAlsoInterlace) {
  mop::PrecisionGuard g(256);
  auto cfg = small_r1(30);
  cfg.s1.gamma = "0.5";
  cfg.s1.delta = "2";
  cfg.s2.gamma = "1.5";
  cfg.s2.delta = "0.25";
  cfg.b = "1.6";
  mop::Weights w(cfg);
  mop::MopSystem sys(w, 30);
  EXPECT_LT(sys.max_recurrence_residual(), Real("1e-50"));
  for (int n = 0; n <= 30; ++n) EXPECT_TRUE(sys.check_interlacing(n).ok()) << n;
}

TEST(Alternation, DetectsViolations) {
  mop::PrecisionGuard g(64);
  std::vector<Real> x{Real(1), Real(3)}, y{Real(2), Real(4)};
  EXPECT_TRUE(mop::check_alternation(x, y, 0).ok());
  EXPECT_FALSE(mop::check_alternation(x, y, 1).ok());
  std::vector<Real> z{Real(2), Real("2.5")};
  EXPECT_FALSE(mop::check_alternation(x, z, -1).strict);
  std::vector<Real> c{Real(1), Real(5)};
  EXPECT_FALSE(mop::check_alternation(x, c, -1).strict);
}
