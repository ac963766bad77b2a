#pragma once

#include "mop/second_kind.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace mop {

// Tail average of a_{6k+i} over the last three available k <= k_tail.
struct TailEstimate {
  int i = 0;
  int k_last = 0;
  Real value;
  Real error_proxy;  // |a_{6k+i} - a_{6(k-1)+i}| at k = k_last
  std::vector<Real> increments;  // successive |differences| along the whole sequence
  bool increments_monotone = true;  // over the last four increments
};

struct RatioSequence {
  int i = 0;
  int family = 1;  // 1: P_n, 2: P_{n,2}, 3: Psi_n at the principal cube root of z
  Cx z;
  std::vector<int> k;
  std::vector<Cx> value;
  Cx last() const { return value.back(); }
  Real error_proxy() const;             // |r_K - r_{K-1}|
  bool deviations_decreasing(int last_terms = 4) const;
};

struct RelationResidual {
  std::string name;
  Cx z;
  Real residual;  // |lhs - rhs| / max(|lhs|, |rhs|)
};

struct DistinctnessReport {
  bool ok = true;
  Real min_ratio;  // min over pairs of separation / (10 * max error proxy)
  std::vector<std::string> failures;
};

class Asymptotics {
 public:
  explicit Asymptotics(const SecondKind& sk);

  // Four real points outside both intervals and four complex points at
  // distance alpha^3 from them, in the tau plane.
  std::vector<Cx> test_set() const;

  TailEstimate estimate_limit_a(int i, int k_tail) const;
  std::array<TailEstimate, 6> estimate_all(int k_tail) const;

  // Largest k with P_{6k+i+1} (family 1) or P_{6k+i+1,2} (family 2) available.
  int k_max(int i) const;
  Cx ratio(int i, int family, int k, const Cx& z) const;
  RatioSequence ratio_sequence(int i, int family, const Cx& z) const;

  // Residuals of the limit-function relations at the largest common k, with
  // the recurrence-limit estimates `a_hat` in the ratio-of-differences laws.
  std::vector<RelationResidual> relation_residuals(const Cx& z, const std::array<Real, 6>& a_hat) const;
  DistinctnessReport distinctness(const Cx& z) const;

  // |P_n(z)|^{1/floor(n/3)} and |P_{n,2}(z)|^{1/floor(n/6)}.
  Real nth_root_1(int n, const Cx& z) const;
  Real nth_root_2(int n, const Cx& z) const;
  // (int P_{6k+j}^2 dnu)^{1/4k} and (int P_{6k+j,2}^2 dnu_2)^{1/2k}.
  Real norm_root_1(int j, int k) const;
  Real norm_root_2(int j, int k) const;
  // kappa_{6k+i+1} / kappa_{6k+i} (family 1) and the kappa_{n,2} analogue.
  Real kappa_ratio(int i, int family, int k) const;

  // Zeros of Q_n on (0, alpha): cube roots of the zeros of P_n.
  std::vector<Real> star_zeros_1(int n) const;
  std::vector<Real> star_zeros_2(int n) const;
  // sup |F_n - F| between the zero counting measure of P_n and a reference CDF
  // on [0, alpha^3].
  Real kolmogorov_distance(int n, const std::function<double(double)>& cdf) const;

 private:
  const SecondKind& sk_;
  const MopSystem& sys_;
};

}  // namespace mop
