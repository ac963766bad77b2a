#include "mop/mop_core.hpp"

#include "mop/errors.hpp"
#include "mop/parallel.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mop {

std::vector<Condition> defining_conditions(int n) {
  const int r = n % 3;
  const int m = n / 2;
  // s1 family: k = 0..m-1 (n even) or 0..m (n odd); f*s1 family: k = 0..m-1.
  const int s1_last = (n % 2 == 0) ? m - 1 : m;
  std::vector<Condition> out;
  // Rotation factor 1 + w^(k+n) + w^(2(k+n)) survives iff k + n = 0 mod 3; the
  // integrand t^{k+r} P(t^3) s1(t) dt becomes tau^j against weight A.
  for (int k = 0; k <= s1_last; ++k) {
    if ((k + r) % 3 == 0) out.push_back({WeightId::A, (k + r) / 3});
  }
  // f(wz) = w^2 f(z) shifts the survival rule to k + n + 2 = 0 mod 3; the
  // integrand t^{k+r+2} g(t^3) P s1 dt becomes tau^{j} against Af.
  for (int k = 0; k <= m - 1; ++k) {
    if ((k + r + 2) % 3 == 0) out.push_back({WeightId::Af, (k + r + 2) / 3 - 1});
  }
  if (static_cast<int>(out.size()) != n / 3) {
    std::ostringstream os;
    os << "condition count " << out.size() << " != floor(n/3) = " << n / 3 << " for n = " << n;
    throw std::logic_error(os.str());
  }
  return out;
}

InterlacingReport check_alternation(const std::vector<Real>& x, const std::vector<Real>& y, int first_expected) {
  InterlacingReport rep;
  struct Item {
    Real v;
    int who;
    size_t idx;
  };
  std::vector<Item> all;
  for (size_t i = 0; i < x.size(); ++i) all.push_back({x[i], 0, i});
  for (size_t i = 0; i < y.size(); ++i) all.push_back({y[i], 1, i});
  std::sort(all.begin(), all.end(), [](const Item& p, const Item& q) { return p.v < q.v; });
  for (size_t i = 1; i < all.size(); ++i) {
    if (all[i].who == all[i - 1].who || all[i].v == all[i - 1].v) {
      rep.strict = false;
      std::ostringstream os;
      os << "adjacent " << (all[i].who == 0 ? "x" : "y") << "[" << all[i - 1].idx + 1 << "]="
         << to_string(all[i - 1].v, 12) << " and " << (all[i].who == 0 ? "x" : "y") << "[" << all[i].idx + 1
         << "]=" << to_string(all[i].v, 12);
      rep.violations.push_back(os.str());
    }
  }
  if (first_expected >= 0 && !all.empty() && all.front().who != first_expected) {
    rep.directed = false;
    rep.violations.push_back("smallest zero belongs to the wrong member of the pair");
  }
  return rep;
}

MopSystem::MopSystem(const Weights& weights, int n_max)
    : w_(weights), n_max_(n_max), bits_(precision_bits()), hi_bits_(bits_ + bits_ / 2 + 32) {
  const int top = n_max + 1;
  const int dmax = top / 3;
  // Legendre degrees up to dmax cover both unknowns and condition test functions.
  const int lmax = dmax + 1;
  build_basis(lmax);

  polys_.resize(top + 1);
  parallel_for(0, top + 1, [&](int n) { polys_[n] = solve(n); });

  rec_.resize(n_max >= 2 ? n_max - 1 : 0);
  parallel_for(2, n_max + 1, [&](int n) {
    RecurrenceEntry e;
    e.n = n;
    const Poly& pn = polys_[n].coeffs;
    const Poly& pn1 = polys_[n + 1].coeffs;
    const Poly& pm2 = polys_[n - 2].coeffs;
    const int r = n % 3;
    size_t len = std::max(pn.size() + 1, pn1.size());
    Poly lhs(len, Real(0));
    for (size_t i = 0; i < pn.size(); ++i) lhs[i + (r == 2 ? 1 : 0)] += pn[i];
    for (size_t i = 0; i < pn1.size(); ++i) lhs[i] -= pn1[i];
    const size_t d2 = pm2.size() - 1;
    e.a = lhs[d2];
    Real res = 0;
    for (size_t i = 0; i < len; ++i) {
      Real v = lhs[i] - (i < pm2.size() ? Real(e.a * pm2[i]) : Real(0));
      if (abs(v) > res) res = abs(v);
    }
    e.residual = res;
    const int m = n / 2;
    if (n % 2 == 0) {
      e.a_integral = integral_s1(n, m) / integral_s1(n - 2, m - 1);
    } else {
      e.a_integral = integral_f(n, m) / integral_f(n - 2, m - 1);
    }
    e.route_disagreement = abs(e.a - e.a_integral) / abs(e.a);
    if (!(e.a > 0)) {
      std::ostringstream os;
      os << "recurrence coefficient a_" << n << " = " << to_string(e.a, 20) << " is not positive";
      throw HypothesisViolation(os.str());
    }
    rec_[n - 2] = std::move(e);
  });
}

void MopSystem::build_basis(int lmax) {
  PrecisionGuard guard(hi_bits_);
  const size_t nq = w_.t_tau().size();
  hi_w_.resize(nq);
  hi_tau_.resize(nq);
  hi_g_.resize(nq);
  for (size_t q = 0; q < nq; ++q) {
    hi_w_[q] = with_bits(w_.t_w()[q], hi_bits_);
    hi_tau_[q] = with_bits(w_.t_tau()[q], hi_bits_);
    hi_g_[q] = with_bits(w_.t_g()[q], hi_bits_);
  }
  const Real A = with_bits(w_.alpha3(), hi_bits_);
  const auto& tau = hi_tau_;
  leg_at_nodes_.assign(lmax + 1, std::vector<Real>(nq));
  for (size_t q = 0; q < nq; ++q) {
    Real x = 2 * tau[q] / A - 1;
    Real pm1 = 1, p = x;
    leg_at_nodes_[0][q] = 1;
    if (lmax >= 1) leg_at_nodes_[1][q] = x;
    for (int i = 1; i < lmax; ++i) {
      Real pn = ((2 * i + 1) * x * p - i * pm1) / (i + 1);
      pm1 = p;
      p = pn;
      leg_at_nodes_[i + 1][q] = p;
    }
  }
  leg_coeffs_.assign(lmax + 1, Poly{});
  leg_coeffs_[0] = Poly{Real(1)};
  if (lmax >= 1) leg_coeffs_[1] = Poly{Real(-1), 2 / A};
  for (int i = 1; i < lmax; ++i) {
    Poly next(i + 2, Real(0));
    for (int c = 0; c <= i; ++c) {
      // (2i+1)(2 tau / A - 1) L_i - i L_{i-1}
      next[c + 1] += (2 * i + 1) * 2 * leg_coeffs_[i][c] / A;
      next[c] -= (2 * i + 1) * leg_coeffs_[i][c];
    }
    for (int c = 0; c < i; ++c) next[c] -= i * leg_coeffs_[i - 1][c];
    for (auto& v : next) v /= (i + 1);
    leg_coeffs_[i + 1] = std::move(next);
  }
}

std::vector<Real> MopSystem::legendre_solve(int n, int d, const std::vector<Condition>& conds) const {
  PrecisionGuard guard(hi_bits_);
  const auto& tw = hi_w_;
  const auto& tau = hi_tau_;
  const auto& gv = hi_g_;
  const size_t nq = tau.size();

  // Each family's conditions span tau^{j0..j0+c-1}; the equivalent test
  // functions tau^{j0} L_i(tau), i < c, keep the system well conditioned.
  struct Family {
    WeightId id;
    int j0;
    int count;
  };
  std::vector<Family> fams;
  for (const auto& c : conds) {
    if (fams.empty() || fams.back().id != c.family) {
      fams.push_back({c.family, c.j, 1});
    } else {
      if (c.j != fams.back().j0 + fams.back().count) throw std::logic_error("non-contiguous condition indices");
      fams.back().count++;
    }
  }

  // Matrix rows: test functions; columns: Legendre coefficients 0..d.
  std::vector<std::vector<Real>> M(d, std::vector<Real>(d + 1, Real(0)));
  int row = 0;
  for (const auto& fam : fams) {
    std::vector<Real> base(nq);
    for (size_t q = 0; q < nq; ++q) {
      Real v = 3 * tw[q] * pow(tau[q], fam.j0);
      if (fam.id == WeightId::Af) v *= tau[q] * gv[q];
      base[q] = v;
    }
    for (int i = 0; i < fam.count; ++i, ++row) {
      for (size_t q = 0; q < nq; ++q) {
        Real bi = base[q] * leg_at_nodes_[i][q];
        for (int c = 0; c <= d; ++c) M[row][c] += bi * leg_at_nodes_[c][q];
      }
    }
  }
  // Monic: coefficient of L_d fixed to 1 / lead(L_d).
  Real xd = 1 / leg_coeffs_[d].back();
  std::vector<Real> rhs(d);
  for (int i = 0; i < d; ++i) rhs[i] = -M[i][d] * xd;

  // Gaussian elimination with partial pivoting.
  std::vector<int> perm(d);
  for (int i = 0; i < d; ++i) perm[i] = i;
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int i = col + 1; i < d; ++i) {
      if (abs(M[i][col]) > abs(M[piv][col])) piv = i;
    }
    if (M[piv][col] == 0) {
      std::ostringstream os;
      os << "singular orthogonality system for n = " << n;
      throw NumericalError(os.str());
    }
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int i = col + 1; i < d; ++i) {
      Real f = M[i][col] / M[col][col];
      if (f == 0) continue;
      for (int c = col; c < d; ++c) M[i][c] -= f * M[col][c];
      rhs[i] -= f * rhs[col];
    }
  }
  std::vector<Real> x(d + 1);
  x[d] = xd;
  for (int i = d - 1; i >= 0; --i) {
    Real s = rhs[i];
    for (int c = i + 1; c < d; ++c) s -= M[i][c] * x[c];
    x[i] = s / M[i][i];
  }
  std::vector<Real> mono(d + 1, Real(0));
  for (int c = 0; c <= d; ++c) {
    for (size_t k = 0; k < leg_coeffs_[c].size(); ++k) mono[k] += x[c] * leg_coeffs_[c][k];
  }
  return mono;
}

ReducedPoly MopSystem::solve(int n) const {
  ReducedPoly out;
  out.n = n;
  out.r = n % 3;
  out.condition_residual = 0;
  out.root_min_gap = 0;
  out.root_max_imag = 0;
  const int d = n / 3;
  if (d == 0) {
    out.coeffs = Poly{Real(1)};
    return out;
  }
  const auto conds = defining_conditions(n);
  const std::vector<Real> mono = legendre_solve(n, d, conds);
  out.coeffs.resize(d + 1);
  for (int k = 0; k < d; ++k) out.coeffs[k] = with_bits(mono[k], bits_);
  out.coeffs[d] = Real(1);

  // Residuals of the defining conditions in the monomial moment form.
  for (const auto& c : conds) {
    Real s = 0, scale = 0;
    for (int k = 0; k <= d; ++k) {
      Real t = out.coeffs[k] * w_.moment(c.family, c.j + k);
      s += t;
      scale += abs(t);
    }
    Real rel = abs(s) / scale;
    if (rel > out.condition_residual) out.condition_residual = rel;
  }

  RootResult rr = real_roots(out.coeffs);
  out.roots = rr.roots;
  out.root_min_gap = rr.min_gap;
  out.root_max_imag = rr.max_imag;
  const Real A = w_.alpha3();
  std::ostringstream diag;
  if (rr.max_imag > A * Real("1e-20")) diag << "non-real zero (|Im| = " << to_string(rr.max_imag, 6) << ")";
  if (d >= 2 && rr.min_gap < A * Real("1e-20")) diag << "repeated zero (gap " << to_string(rr.min_gap, 6) << ")";
  if (!(rr.roots.front() > 0) || !(rr.roots.back() < A)) diag << "zero outside (0, alpha^3)";
  if (!diag.str().empty()) {
    throw HypothesisViolation("P_" + std::to_string(n) + ": " + diag.str());
  }
  return out;
}

const ReducedPoly& MopSystem::P(int n) const {
  if (n < 0 || n >= static_cast<int>(polys_.size())) throw std::out_of_range("P_n index out of range");
  return polys_[n];
}

Cx MopSystem::eval_Q(int n, const Cx& z) const {
  const auto& p = P(n);
  return ipow(z, p.r) * eval(p.coeffs, z * z * z);
}

Real MopSystem::eval_Q(int n, const Real& t) const {
  const auto& p = P(n);
  return pow(t, p.r) * eval(p.coeffs, t * t * t);
}

const RecurrenceEntry& MopSystem::recurrence(int n) const {
  if (n < 2 || n > n_max_) throw std::out_of_range("a_n index out of range");
  return rec_[n - 2];
}

Real MopSystem::integral_s1(int n, int m) const {
  const auto& tx = w_.t_x();
  const auto& tw = w_.t_w();
  Real s = 0;
  for (size_t q = 0; q < tx.size(); ++q) s += tw[q] * pow(tx[q], m) * eval_Q(n, tx[q]);
  return s;
}

Real MopSystem::integral_f(int n, int m) const {
  const auto& tx = w_.t_x();
  const auto& tw = w_.t_w();
  const auto& gv = w_.t_g();
  Real s = 0;
  for (size_t q = 0; q < tx.size(); ++q) s += tw[q] * pow(tx[q], m + 2) * gv[q] * eval_Q(n, tx[q]);
  return s;
}

InterlacingReport MopSystem::check_interlacing(int n) const {
  const auto& x = P(n).roots;
  const auto& y = P(n + 1).roots;
  int first = -1;
  if (x.size() == y.size()) {
    first = 0;
  } else if (y.size() == x.size() + 1) {
    first = 1;
  }
  InterlacingReport rep = check_alternation(x, y, first);
  rep.n = n;
  if (first < 0) {
    rep.directed = false;
    rep.violations.push_back("degree pattern of the pair is not (k,k) or (k,k+1)");
  }
  if (first == 1 && !y.empty() && !x.empty() && y.back() < x.back()) {
    rep.directed = false;
    rep.violations.push_back("largest zero should belong to the higher-degree member");
  }
  return rep;
}

Real MopSystem::max_recurrence_residual() const {
  Real m = 0;
  for (const auto& e : rec_) m = std::max(m, e.residual);
  return m;
}

Real MopSystem::max_route_disagreement() const {
  Real m = 0;
  for (const auto& e : rec_) m = std::max(m, e.route_disagreement);
  return m;
}

Real MopSystem::max_condition_residual() const {
  Real m = 0;
  for (const auto& p : polys_) m = std::max(m, p.condition_residual);
  return m;
}

}  // namespace mop
