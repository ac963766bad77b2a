#pragma once

#include "mop/numeric.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace mop {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Generalized Jacobi density (inner distance)^gamma * (outer distance)^delta * scale.
// For s1 on (0, alpha) the inner endpoint is 0; for s2 on (-b, -a) it is -a.
struct WeightParams {
  std::string gamma = "0";
  std::string delta = "0";
  std::string scale = "1";
};

// Numeric fields are kept as text and parsed at the precision in force, so a
// precision escalation re-reads them exactly. Accepted forms: decimal literals
// and cbrt(<decimal>).
struct StarConfig {
  std::string alpha = "1";
  std::string a = "1";
  std::string b = "2";
  WeightParams s1;
  WeightParams s2;
  int precision_bits = 256;
  int quad_points = 192;
  int n_max = 60;
  int equilibrium_nodes = 400;
  std::string name = "custom";

  Real alpha_value() const;
  Real a_value() const;
  Real b_value() const;
  Real lambda() const;  // 2b^3/a^3 - 1
  Real mu() const;      // 2alpha^3/a^3 + 1

  // Throws ConfigError on any violated constraint.
  void validate() const;
};

Real parse_config_number(const std::string& text, const std::string& key);

StarConfig parse_config(const nlohmann::json& j);
StarConfig load_config(const std::string& path);
nlohmann::json to_json(const StarConfig& cfg);

// alpha=1, a=1, b=2, s1 = s2 = 1.
StarConfig reference_r1();
// alpha=1, a=1, b=cbrt(2): lambda = mu = 3.
StarConfig reference_r0();

}  // namespace mop
