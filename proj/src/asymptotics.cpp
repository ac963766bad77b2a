#include "mop/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mop {

namespace {

Real rel_diff(const Cx& lhs, const Cx& rhs) {
  Real den = std::max(abs(lhs), abs(rhs));
  if (den == 0) return Real(0);
  return abs(lhs - rhs) / den;
}

Cx principal_cbrt(const Cx& w) {
  std::complex<double> wd = to_std(w);
  std::complex<double> u = std::polar(std::cbrt(std::abs(wd)), std::arg(wd) / 3);
  Cx z = from_std(u);
  // Newton polish at working precision.
  for (int it = 0; it < 8; ++it) z = z - (z * z * z - w) / (Real(3) * z * z);
  return z;
}

}  // namespace

Real RatioSequence::error_proxy() const {
  if (value.size() < 2) return Real(0);
  return abs(value[value.size() - 1] - value[value.size() - 2]);
}

bool RatioSequence::deviations_decreasing(int last_terms) const {
  if (static_cast<int>(value.size()) < last_terms + 1) return false;
  std::vector<Real> dev;
  for (size_t j = value.size() - last_terms; j < value.size(); ++j) dev.push_back(abs(value[j] - value[j - 1]));
  for (size_t j = 1; j < dev.size(); ++j)
    if (!(dev[j] < dev[j - 1])) return false;
  return true;
}

Asymptotics::Asymptotics(const SecondKind& sk) : sk_(sk), sys_(sk.system()) {}

std::vector<Cx> Asymptotics::test_set() const {
  const Weights& w = sys_.weights();
  const Real A = w.alpha3(), a3 = w.a3(), b3 = w.b3();
  const Real mid2 = -(a3 + b3) / 2;
  return {Cx(2 * A),        Cx(3 * A),        Cx(-a3 / 2),      Cx(-b3 - A),
          Cx(mid2, A),      Cx(mid2, -A),     Cx(A / 2, A),     Cx(A / 2, -A)};
}

TailEstimate Asymptotics::estimate_limit_a(int i, int k_tail) const {
  TailEstimate t;
  t.i = i;
  const int nm = sys_.n_max();
  int kl = std::min(k_tail, (nm - i) / 6);
  int k0 = (i < 2) ? 1 : 0;  // a_n starts at n = 2
  if (kl - k0 < 2) throw std::invalid_argument("too few recurrence coefficients for a tail estimate");
  t.k_last = kl;
  t.value = (sys_.a(6 * kl + i) + sys_.a(6 * (kl - 1) + i) + sys_.a(6 * (kl - 2) + i)) / 3;
  for (int k = k0 + 1; k <= kl; ++k) t.increments.push_back(abs(sys_.a(6 * k + i) - sys_.a(6 * (k - 1) + i)));
  t.error_proxy = t.increments.back();
  const size_t m = t.increments.size();
  for (size_t j = (m > 4 ? m - 4 : 0) + 1; j < m; ++j)
    if (!(t.increments[j] <= t.increments[j - 1])) t.increments_monotone = false;
  return t;
}

std::array<TailEstimate, 6> Asymptotics::estimate_all(int k_tail) const {
  std::array<TailEstimate, 6> out;
  for (int i = 0; i < 6; ++i) out[i] = estimate_limit_a(i, k_tail);
  return out;
}

int Asymptotics::k_max(int i) const { return (std::min(sk_.n_max(), sys_.n_max() + 1) - i - 1) / 6; }

Cx Asymptotics::ratio(int i, int family, int k, const Cx& z) const {
  const int n = 6 * k + i;
  if (family == 1) return eval(sys_.P(n + 1).coeffs, z) / eval(sys_.P(n).coeffs, z);
  if (family == 2) return eval(sk_.record(n + 1).P2, z) / eval(sk_.record(n).P2, z);
  if (family == 3) {
    Cx u = principal_cbrt(z);
    return sk_.Psi(n + 1, u) / sk_.Psi(n, u);
  }
  throw std::invalid_argument("ratio family must be 1, 2 or 3");
}

RatioSequence Asymptotics::ratio_sequence(int i, int family, const Cx& z) const {
  RatioSequence s;
  s.i = i;
  s.family = family;
  s.z = z;
  for (int k = 1; k <= k_max(i); ++k) {
    s.k.push_back(k);
    s.value.push_back(ratio(i, family, k, z));
  }
  return s;
}

std::vector<RelationResidual> Asymptotics::relation_residuals(const Cx& z, const std::array<Real, 6>& a) const {
  int k = k_max(5);
  std::array<Cx, 6> F1, F2;
  for (int i = 0; i < 6; ++i) {
    F1[i] = ratio(i, 1, k, z);
    F2[i] = ratio(i, 2, k, z);
  }
  const Cx one(Real(1));
  std::vector<RelationResidual> out;
  auto add = [&](const char* name, const Cx& l, const Cx& r) { out.push_back({name, z, rel_diff(l, r)}); };
  add("F1_2 = z F1_0", F1[2], z * F1[0]);
  add("F1_5 = z F1_3", F1[5], z * F1[3]);
  add("F1_0 F1_1 = F1_3 F1_4", F1[0] * F1[1], F1[3] * F1[4]);
  add("F1_1 F1_2 = F1_4 F1_5", F1[1] * F1[2], F1[4] * F1[5]);
  add("F1_2 F1_3 = F1_5 F1_0", F1[2] * F1[3], F1[5] * F1[0]);
  add("(1 - F1_3)/(1 - F1_0) = a3/a0", (one - F1[3]) / (one - F1[0]), Cx(a[3] / a[0]));
  add("(1 - F1_4)/(1 - F1_1) = a4/a1", (one - F1[4]) / (one - F1[1]), Cx(a[4] / a[1]));
  add("(z - F1_5)/(z - F1_2) = a5/a2", (z - F1[5]) / (z - F1[2]), Cx(a[5] / a[2]));
  add("F2_0 = F2_2", F2[0], F2[2]);
  add("F2_3 = F2_5", F2[3], F2[5]);
  add("F2_0 F2_1 = F2_3 F2_4", F2[0] * F2[1], F2[3] * F2[4]);
  add("F2_1 F2_2 = F2_4 F2_5", F2[1] * F2[2], F2[4] * F2[5]);
  add("F2_2 F2_3 = F2_5 F2_0", F2[2] * F2[3], F2[5] * F2[0]);
  return out;
}

DistinctnessReport Asymptotics::distinctness(const Cx& z) const {
  DistinctnessReport rep;
  std::array<RatioSequence, 6> seq;
  for (int i = 0; i < 6; ++i) seq[i] = ratio_sequence(i, 1, z);
  bool first = true;
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      Real sep = abs(seq[i].last() - seq[j].last());
      Real proxy = std::max(seq[i].error_proxy(), seq[j].error_proxy());
      Real ratio = proxy > 0 ? Real(sep / (10 * proxy)) : Real(1e300);
      if (first || ratio < rep.min_ratio) rep.min_ratio = ratio;
      first = false;
      if (!(ratio > 1)) {
        rep.ok = false;
        rep.failures.push_back("F1_" + std::to_string(i) + " vs F1_" + std::to_string(j));
      }
    }
  }
  return rep;
}

Real Asymptotics::nth_root_1(int n, const Cx& z) const {
  const int d = n / 3;
  if (d == 0) throw std::invalid_argument("nth root needs n >= 3");
  return pow(abs(eval(sys_.P(n).coeffs, z)), Real(1) / d);
}

Real Asymptotics::nth_root_2(int n, const Cx& z) const {
  const int d = n / 6;
  if (d == 0) throw std::invalid_argument("nth root needs n >= 6");
  return pow(abs(eval(sk_.record(n).P2, z)), Real(1) / d);
}

Real Asymptotics::norm_root_1(int j, int k) const {
  const Real& K = sk_.record(6 * k + j).K;
  return pow(1 / (K * K), Real(1) / (4 * k));
}

Real Asymptotics::norm_root_2(int j, int k) const {
  const auto& r = sk_.record(6 * k + j);
  return pow(r.K * r.K / (r.K2 * r.K2), Real(1) / (2 * k));
}

Real Asymptotics::kappa_ratio(int i, int family, int k) const {
  const auto& lo = sk_.record(6 * k + i);
  const auto& hi = sk_.record(6 * k + i + 1);
  return family == 1 ? Real(hi.kappa / lo.kappa) : Real(hi.kappa2 / lo.kappa2);
}

std::vector<Real> Asymptotics::star_zeros_1(int n) const {
  std::vector<Real> out;
  for (const auto& x : sys_.P(n).roots) out.push_back(cbrt_real(x));
  return out;
}

std::vector<Real> Asymptotics::star_zeros_2(int n) const {
  std::vector<Real> out;
  for (const auto& x : sk_.record(n).roots) out.push_back(cbrt_real(x));
  return out;
}

Real Asymptotics::kolmogorov_distance(int n, const std::function<double(double)>& cdf) const {
  const auto& roots = sys_.P(n).roots;
  const double m = static_cast<double>(roots.size());
  if (m == 0) throw std::invalid_argument("P_n has no zeros");
  double worst = 0;
  for (size_t j = 0; j < roots.size(); ++j) {
    double F = cdf(to_double(roots[j]));
    worst = std::max({worst, std::abs(F - j / m), std::abs(F - (j + 1) / m)});
  }
  return Real(worst);
}

}  // namespace mop
