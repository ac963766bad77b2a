// Runs every acceptance check on R1 and R0 and prints one PASS/FAIL line per
// criterion and config. Exit status is nonzero if any line fails.
#include "mop/report.hpp"

#include <iostream>

namespace {

const char* kTitles[] = {"",
                         "structure suite",
                         "second-kind suite",
                         "interlacing suite",
                         "ratio-limit suite",
                         "surface suite",
                         "ratio-to-surface convergence",
                         "equilibrium suite",
                         "h_n limit suite"};

}  // namespace

int main() {
  bool ok = true;
  for (const mop::StarConfig& cfg : {mop::reference_r1(), mop::reference_r0()}) {
    mop::Pipeline p(cfg);
    mop::VerificationReport rep = mop::verify(p);
    std::cout << rep.summary();
    for (int c = 1; c <= 8; ++c) {
      const bool pass = rep.criterion_pass(c);
      ok = ok && pass;
      std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c << " (" << kTitles[c] << ") on " << cfg.name;
      for (const auto& r : rep.checks)
        if (r.criterion == c && !r.pass) std::cout << " [" << r.id << " measured " << r.measured << " tol " << r.tolerance << "]";
      std::cout << '\n';
    }
    std::cout.flush();
  }
  return ok ? 0 : 1;
}
