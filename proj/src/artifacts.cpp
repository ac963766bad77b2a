#include "mop/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mop {

namespace fs = std::filesystem;

namespace {

std::string R(const Real& x) { return to_string(x, 30); }

std::string D(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17e", x);
  return buf;
}

std::string join(const std::vector<Real>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + R(v[i]);
  return s;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const nlohmann::json& j) { open_out(path) << j.dump(2) << '\n'; }

}  // namespace

void write_compute_artifacts(const Pipeline& p, const fs::path& dir) {
  fs::create_directories(dir);
  const int nm = p.config().n_max;
  const MopSystem& sys = p.system();
  {
    auto out = open_out(dir / "polys.csv");
    out << "n,degree,coefficients,roots\n";
    for (int n = 0; n <= nm; ++n) {
      const ReducedPoly& P = sys.P(n);
      out << n << ',' << P.coeffs.size() - 1 << ',' << join(P.coeffs) << ',' << join(P.roots) << '\n';
    }
  }
  {
    auto out = open_out(dir / "recurrence.csv");
    out << "n,a_n,a_n_integral,route_disagreement,residual\n";
    for (int n = 2; n <= nm; ++n) {
      const RecurrenceEntry& e = sys.recurrence(n);
      out << n << ',' << R(e.a) << ',' << R(e.a_integral) << ',' << R(e.route_disagreement) << ',' << R(e.residual) << '\n';
    }
  }
  {
    auto out = open_out(dir / "second_kind.csv");
    out << "n,degree_P2,roots,K_n,K_n2\n";
    for (int n = 0; n <= nm; ++n) {
      const SecondKindRecord& r = p.second_kind().record(n);
      out << n << ',' << r.roots.size() << ',' << join(r.roots) << ',' << R(r.K) << ',' << R(r.K2) << '\n';
    }
  }
}

void write_analysis_artifacts(Pipeline& p, const fs::path& dir) {
  fs::create_directories(dir);
  set_precision_bits(p.precision_bits());
  const Asymptotics& as = p.asymptotics();
  const RiemannSurface& s = p.surface();
  const ALimits a = s.closed_form_limits();
  const EquilibriumSolution& e = p.equilibrium();

  std::vector<Cx> Z{Cx(Real(2)), Cx(Real(-3), Real(1))};
  for (const Cx& z : as.test_set()) Z.push_back(z);
  {
    auto out = open_out(dir / "ratios.csv");
    out << "i,family,k,z_re,z_im,value_re,value_im,limit_re,limit_im\n";
    for (const Cx& z : Z) {
      for (int family = 1; family <= 3; ++family) {
        for (int i = 0; i < 6; ++i) {
          RatioSequence seq = as.ratio_sequence(i, family, z);
          std::string lim = ",";
          if (family < 3) {
            Cx F = s.limiting_F(i, family, z, a);
            lim = R(F.re) + ',' + R(F.im);
          }
          for (size_t q = 0; q < seq.k.size(); ++q)
            out << i << ',' << family << ',' << seq.k[q] << ',' << R(z.re) << ',' << R(z.im) << ',' << R(seq.value[q].re)
                << ',' << R(seq.value[q].im) << ',' << lim << '\n';
        }
      }
    }
  }
  {
    nlohmann::json j;
    auto est = as.estimate_all(9);
    std::array<Real, 6> ahat;
    for (int i = 0; i < 6; ++i) {
      ahat[i] = est[i].value;
      j["a_hat"].push_back({{"i", i}, {"k_last", est[i].k_last}, {"value", R(est[i].value)}, {"error_proxy", R(est[i].error_proxy)}});
    }
    for (const Cx& z : as.test_set())
      for (const RelationResidual& r : as.relation_residuals(z, ahat))
        j["relation_residuals"].push_back({{"name", r.name}, {"z", {R(z.re), R(z.im)}}, {"residual", R(r.residual)}});
    for (int n : {30, 45, 60}) {
      if (n > p.config().n_max) continue;
      for (const Cx& z : as.test_set()) {
        const auto zd = to_std(z);
        j["nth_root"].push_back({{"n", n},
                                 {"z", {R(z.re), R(z.im)}},
                                 {"family1", R(as.nth_root_1(n, z))},
                                 {"family2", R(as.nth_root_2(n, z))},
                                 {"exp_minus_V1", D(std::exp(-potential(e.mu1, zd)))},
                                 {"exp_minus_V2", D(std::exp(-potential(e.mu2, zd)))}});
      }
    }
    write_json(dir / "limits.json", j);
  }
  {
    const SurfaceModel& m = s.model();
    nlohmann::json j{{"lambda", R(m.lambda)}, {"mu", R(m.mu)},       {"beta", R(m.beta)},         {"gamma", R(m.gamma)},
                     {"c", R(m.c)},           {"d", R(m.d)},         {"h", R(m.h)},               {"theta1", R(m.theta1)},
                     {"theta2", R(m.theta2)}, {"H_beta", R(m.H_beta)}, {"C_prod", R(m.C_prod)}, {"delta_a", R(s.delta_a())}};
    j["a_limits"] = {R(a.a0), R(a.a1), R(a.a0), R(a.a3), R(a.a4), R(a.a3)};
    for (const Real& w : RiemannSurface::omega1(a)) j["omega1"].push_back(R(w));
    for (int l = 0; l < 6; ++l) j["omega2"].push_back(R(1 / s.boundary_law(2, l, a).constant));
    write_json(dir / "surface.json", j);

    auto out = open_out(dir / "branches.csv");
    out << "z_re,z_im,psi0_re,psi0_im,psi1_re,psi1_im,psi2_re,psi2_im\n";
    for (const Cx& z : s.sample_points(200)) {
      auto w = s.eval_branches(z);
      out << R(z.re) << ',' << R(z.im);
      for (const Cx& x : w) out << ',' << R(x.re) << ',' << R(x.im);
      out << '\n';
    }
  }
  {
    auto out = open_out(dir / "equilibrium.csv");
    out << "interval,node,lo,hi,weight,W\n";
    const DiscreteMeasure* mu[2] = {&e.mu1, &e.mu2};
    const std::vector<double>* W[2] = {&e.W1, &e.W2};
    for (int j = 0; j < 2; ++j)
      for (size_t i = 0; i < mu[j]->weights.size(); ++i)
        out << j + 1 << ',' << D(mu[j]->nodes[i]) << ',' << D(mu[j]->edges[i]) << ',' << D(mu[j]->edges[i + 1]) << ','
            << D(mu[j]->weights[i]) << ',' << D((*W[j])[i]) << '\n';
    auto s1 = e.mu1.support(1e-12), s2 = e.mu2.support(1e-12);
    write_json(dir / "equilibrium.json", {{"omega1", D(e.omega1)},
                                          {"omega2", D(e.omega2)},
                                          {"energy", D(e.energy)},
                                          {"nodes", p.config().equilibrium_nodes},
                                          {"support1", {D(s1.first), D(s1.second)}},
                                          {"support2", {D(s2.first), D(s2.second)}}});
  }
}

void write_report(const VerificationReport& rep, const fs::path& dir) {
  fs::create_directories(dir);
  write_json(dir / "report.json", rep.to_json());
}

namespace {

const char* kPrelude = R"PY(import csv
import json
import math
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

DATA = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def rows(name):
    with open(os.path.join(DATA, name)) as f:
        return list(csv.DictReader(f))


def optional_json(name):
    path = os.path.join(DATA, name)
    if not os.path.exists(path):
        return None
    with open(path) as f:
        return json.load(f)

)PY";

const char* kStar = R"PY(
# Zeros of Q_n on the star: cube roots of the zeros of P_n in (0, alpha^3),
# rotated onto the three rays. Q_{n,2} zeros sit on the rotated (-b, -a) rays.
polys = rows("polys.csv")
n = int(sys.argv[1]) if len(sys.argv) > 1 else max(int(r["n"]) for r in polys if int(r["n"]) % 3 == 0)
row = next(r for r in polys if int(r["n"]) == n)
taus = [float(x) for x in row["roots"].split()]
fig, ax = plt.subplots(figsize=(6, 6))
for k in range(3):
    rot = complex(math.cos(2 * math.pi * k / 3), math.sin(2 * math.pi * k / 3))
    pts = [rot * t ** (1.0 / 3.0) for t in taus]
    ax.plot([p.real for p in pts], [p.imag for p in pts], "o", ms=3, color="C0", label="Q_n" if k == 0 else None)
if os.path.exists(os.path.join(DATA, "second_kind.csv")):
    sk = next((r for r in rows("second_kind.csv") if int(r["n"]) == n), None)
    if sk is not None and sk["roots"].strip():
        ws = [-abs(float(x)) ** (1.0 / 3.0) for x in sk["roots"].split()]
        for k in range(3):
            rot = complex(math.cos(2 * math.pi * k / 3), math.sin(2 * math.pi * k / 3))
            pts = [rot * w for w in ws]
            ax.plot([p.real for p in pts], [p.imag for p in pts], "s", ms=3, color="C3", label="Q_n,2" if k == 0 else None)
ax.set_aspect("equal")
ax.set_title("zeros for n = %d (%d per ray)" % (n, len(taus)))
ax.legend()
fig.savefig(os.path.join(DATA, "plots", "star_zeros.png"), dpi=150)
)PY";

const char* kTails = R"PY(
# a_n split by n mod 6, with limit lines when surface.json or limits.json exist.
rec = rows("recurrence.csv")
fig, ax = plt.subplots(figsize=(7, 4.5))
for i in range(6):
    pts = [(int(r["n"]), float(r["a_n"])) for r in rec if int(r["n"]) % 6 == i]
    ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", ms=3, color="C%d" % i, label="n = 6k+%d" % i)
surface = optional_json("surface.json")
if surface is not None:
    for i, a in enumerate(surface["a_limits"]):
        ax.axhline(float(a), color="C%d" % i, lw=0.8, ls="--")
limits = optional_json("limits.json")
if limits is not None:
    for e in limits["a_hat"]:
        ax.axhline(float(e["value"]), color="C%d" % e["i"], lw=0.6, ls=":")
ax.set_xlabel("n")
ax.set_ylabel("a_n")
ax.legend(ncol=3, fontsize=8)
fig.savefig(os.path.join(DATA, "plots", "recurrence_tails.png"), dpi=150)
)PY";

const char* kEquilibrium = R"PY(
# Densities of the equilibrium pair: cell weight over cell width.
eq = rows("equilibrium.csv")
fig, axes = plt.subplots(1, 2, figsize=(10, 4))
for j, ax in zip((1, 2), axes):
    cells = [r for r in eq if int(r["interval"]) == j]
    x = [float(r["node"]) for r in cells]
    dens = [float(r["weight"]) / (float(r["hi"]) - float(r["lo"])) for r in cells]
    ax.semilogy(x, dens, color="C%d" % j)
    ax.set_title("mu_%d" % j)
    ax.set_xlabel("tau")
fig.savefig(os.path.join(DATA, "plots", "equilibrium_densities.png"), dpi=150)
)PY";

const char* kRatios = R"PY(
# Relative distance of P_{6k+i+1}/P_{6k+i} to its limit (or successive
# differences when no limit column is present), per family and class.
data = rows("ratios.csv")
z0 = (data[0]["z_re"], data[0]["z_im"])
fig, axes = plt.subplots(1, 3, figsize=(14, 4), sharey=True)
for fam, ax in zip((1, 2, 3), axes):
    for i in range(6):
        seq = [r for r in data if int(r["family"]) == fam and int(r["i"]) == i and (r["z_re"], r["z_im"]) == z0]
        if not seq:
            continue
        ks = [int(r["k"]) for r in seq]
        vals = [complex(float(r["value_re"]), float(r["value_im"])) for r in seq]
        if seq[0]["limit_re"]:
            lim = complex(float(seq[0]["limit_re"]), float(seq[0]["limit_im"]))
            err = [abs(v - lim) / abs(lim) for v in vals]
        else:
            err = [abs(vals[q] - vals[q - 1]) for q in range(1, len(vals))]
            ks = ks[1:]
        ax.semilogy(ks, err, "o-", ms=3, label="i = %d" % i)
    ax.set_title("family %d, z = %s%+si" % (fam, z0[0][:6], z0[1][:6]))
    ax.set_xlabel("k")
axes[0].legend(fontsize=8)
fig.savefig(os.path.join(DATA, "plots", "ratio_curves.png"), dpi=150)
)PY";

}  // namespace

std::vector<std::string> emit_plot_scripts(const fs::path& dir) {
  struct Script {
    const char* name;
    const char* needs;
    const char* body;
  };
  const Script scripts[] = {{"star_zeros.py", "polys.csv", kStar},
                            {"recurrence_tails.py", "recurrence.csv", kTails},
                            {"equilibrium_densities.py", "equilibrium.csv", kEquilibrium},
                            {"ratio_curves.py", "ratios.csv", kRatios}};
  std::vector<std::string> out;
  for (const Script& s : scripts) {
    if (!fs::exists(dir / s.needs)) continue;
    fs::create_directories(dir / "plots");
    open_out(dir / "plots" / s.name) << kPrelude << s.body;
    out.push_back(s.name);
  }
  if (out.empty()) throw std::runtime_error("no plottable artifacts in '" + dir.string() + "'");
  return out;
}

}  // namespace mop
