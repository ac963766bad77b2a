#pragma once

#include "mop/asymptotics.hpp"
#include "mop/config.hpp"
#include "mop/equilibrium.hpp"
#include "mop/riemann_surface.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mop {

// All stages for one config. The polynomial stages run eagerly at
// cfg.precision_bits; on a residual failure or NumericalError the whole chain
// is rebuilt once at twice the bits before the error propagates. Surface and
// equilibrium are built on first use at the precision the chain settled on.
class Pipeline {
 public:
  explicit Pipeline(const StarConfig& cfg);
  ~Pipeline();

  const StarConfig& config() const { return cfg_; }
  int precision_bits() const { return bits_; }
  bool escalated() const { return bits_ != cfg_.precision_bits; }

  const Weights& weights() const { return *w_; }
  const MopSystem& system() const { return *sys_; }
  const SecondKind& second_kind() const { return *sk_; }
  const Asymptotics& asymptotics() const { return *as_; }
  const RiemannSurface& surface();
  const EquilibriumSolution& equilibrium();          // N = cfg.equilibrium_nodes
  const EquilibriumSolution& equilibrium_refined();  // N doubled

 private:
  void build(int bits);

  StarConfig cfg_;
  int bits_ = 0;
  std::unique_ptr<Weights> w_;
  std::unique_ptr<MopSystem> sys_;
  std::unique_ptr<SecondKind> sk_;
  std::unique_ptr<Asymptotics> as_;
  std::unique_ptr<RiemannSurface> surf_;
  std::optional<EquilibriumSolution> eq_, eq2_;
};

struct CheckRecord {
  std::string id;
  int criterion = 0;   // acceptance criterion number, 1..8
  std::string anchor;  // the result being exercised, in words
  double tolerance = 0;
  double measured = 0;
  bool pass = false;
  bool applicable = true;  // false: recorded as passing, nothing to test for this config
  std::string detail;
};

struct VerificationReport {
  std::string config_name;
  nlohmann::json config;
  int precision_bits = 0;
  bool escalated = false;
  double runtime_seconds = 0;
  std::vector<CheckRecord> checks;
  nlohmann::json diagnostics;  // detected supports, equilibrium constants, a-hat values

  bool all_pass() const;
  bool criterion_pass(int criterion) const;
  nlohmann::json to_json() const;
  std::string summary() const;
};

VerificationReport verify(Pipeline& p);

// Test points for the h_n limits: eight points off the star S_0 in the z plane.
std::vector<Cx> h_test_points();

}  // namespace mop
