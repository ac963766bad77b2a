// mop compute | verify | plot
// Exit codes: 0 all checks pass, 1 check failure (or a proven property
// violated), 2 config or input error, 3 numerical non-convergence.
#include "mop/artifacts.hpp"
#include "mop/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Common {
  std::string config;
  std::string out;
  int nmax = -1;
  int precision = -1;
};

void add_common(CLI::App* cmd, Common& c, bool out_required) {
  cmd->add_option("--config", c.config, "config JSON")->required();
  auto* o = cmd->add_option("--out", c.out, "artifact directory");
  if (out_required) o->required();
  cmd->add_option("--nmax", c.nmax, "override n_max")->check(CLI::NonNegativeNumber);
  cmd->add_option("--precision", c.precision, "override precision_bits")->check(CLI::PositiveNumber);
}

mop::StarConfig load(const Common& c) {
  mop::StarConfig cfg = mop::load_config(c.config);
  if (c.nmax >= 0) {
    cfg.n_max = c.nmax;
    // The moment quadrature must stay exact for the new degree range.
    cfg.quad_points = std::max(cfg.quad_points, 2 * cfg.n_max + 16);
  }
  if (c.precision > 0) cfg.precision_bits = c.precision;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple orthogonal polynomials on a star: compute, verify, plot"};
  app.require_subcommand(1);
  Common cc, vc;
  std::string plot_dir;
  auto* compute = app.add_subcommand("compute", "polynomials, recurrence and second-kind tables");
  add_common(compute, cc, true);
  auto* verify = app.add_subcommand("verify", "run every acceptance check; writes all artifacts with --out");
  add_common(verify, vc, false);
  auto* plot = app.add_subcommand("plot", "emit plot scripts for an artifact directory");
  plot->add_option("--out,dir", plot_dir, "artifact directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*compute) {
      mop::Pipeline p(load(cc));
      mop::write_compute_artifacts(p, cc.out);
      std::cout << "wrote polys.csv, recurrence.csv, second_kind.csv to " << cc.out << " at " << p.precision_bits()
                << " bits\n";
      return 0;
    }
    if (*verify) {
      mop::Pipeline p(load(vc));
      mop::VerificationReport rep = mop::verify(p);
      if (!vc.out.empty()) {
        mop::write_compute_artifacts(p, vc.out);
        mop::write_analysis_artifacts(p, vc.out);
        mop::write_report(rep, vc.out);
      }
      std::cout << rep.summary();
      return rep.all_pass() ? 0 : 1;
    }
    if (*plot) {
      for (const auto& s : mop::emit_plot_scripts(plot_dir)) std::cout << "plots/" << s << '\n';
      return 0;
    }
  } catch (const mop::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const mop::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const mop::HypothesisViolation& e) {
    std::cerr << "property violated: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
