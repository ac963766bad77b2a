#include "mop/config.hpp"

#include <fstream>
#include <regex>

namespace mop {

Real parse_config_number(const std::string& text, const std::string& key) {
  static const std::regex decimal(R"(^\s*[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?\s*$)");
  static const std::regex cbrt_form(R"(^\s*cbrt\(\s*([^)]*)\)\s*$)");
  std::smatch m;
  if (std::regex_match(text, decimal)) return parse_real(text);
  if (std::regex_match(text, m, cbrt_form) && std::regex_match(m[1].str(), decimal)) {
    return cbrt_real(parse_real(m[1].str()));
  }
  throw ConfigError("config key '" + key + "': not a decimal number: '" + text + "'");
}

Real StarConfig::alpha_value() const { return parse_config_number(alpha, "alpha"); }
Real StarConfig::a_value() const { return parse_config_number(a, "a"); }
Real StarConfig::b_value() const { return parse_config_number(b, "b"); }

Real StarConfig::lambda() const {
  Real av = a_value(), bv = b_value();
  return 2 * bv * bv * bv / (av * av * av) - 1;
}

Real StarConfig::mu() const {
  Real av = a_value(), al = alpha_value();
  return 2 * al * al * al / (av * av * av) + 1;
}

void StarConfig::validate() const {
  Real al = alpha_value(), av = a_value(), bv = b_value();
  if (!(al > 0)) throw ConfigError("config key 'alpha': must be positive");
  if (!(av > 0)) throw ConfigError("config key 'a': must be positive");
  if (!(av < bv)) throw ConfigError("interval order violated: need 0 < a < b");
  auto check_weight = [](const WeightParams& w, const std::string& id) {
    Real g = parse_config_number(w.gamma, id + ".gamma");
    Real d = parse_config_number(w.delta, id + ".delta");
    Real s = parse_config_number(w.scale, id + ".scale");
    if (g < 0) throw ConfigError("config key '" + id + ".gamma': must be >= 0");
    if (d < 0) throw ConfigError("config key '" + id + ".delta': must be >= 0");
    if (s < 0) throw ConfigError("config key '" + id + ".scale': weight must be nonnegative");
    if (s == 0) throw ConfigError("weight " + id + " is identically zero; both weights must have positive mass");
  };
  check_weight(s1, "s1");
  check_weight(s2, "s2");
  if (precision_bits < 64) throw ConfigError("config key 'precision_bits': must be >= 64");
  if (quad_points < 32) throw ConfigError("config key 'quad_points': must be >= 32");
  if (n_max < 0) throw ConfigError("config key 'n_max': must be >= 0");
  if (quad_points < 2 * n_max + 16) {
    throw ConfigError("config key 'quad_points': must be >= 2*n_max + 16 for exact polynomial moments");
  }
  if (equilibrium_nodes < 50) throw ConfigError("config key 'equilibrium_nodes': must be >= 50");
}

namespace {

std::string number_text(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  throw ConfigError("config key '" + key + "': expected a decimal string");
}

std::string required(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing config key '" + key + "'");
  return number_text(j.at(key), key);
}

int integer_field(const nlohmann::json& j, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  std::string t = number_text(v, key);
  try {
    size_t used = 0;
    int out = std::stoi(t, &used);
    if (used != t.size()) throw ConfigError("config key '" + key + "': expected an integer");
    return out;
  } catch (const std::logic_error&) {
    throw ConfigError("config key '" + key + "': expected an integer");
  }
}

WeightParams weight_field(const nlohmann::json& j, const std::string& key) {
  WeightParams w;
  if (!j.contains(key)) return w;
  const auto& o = j.at(key);
  if (!o.is_object()) throw ConfigError("config key '" + key + "': expected an object");
  if (o.contains("gamma")) w.gamma = number_text(o.at("gamma"), key + ".gamma");
  if (o.contains("delta")) w.delta = number_text(o.at("delta"), key + ".delta");
  if (o.contains("scale")) w.scale = number_text(o.at("scale"), key + ".scale");
  return w;
}

}  // namespace

StarConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  StarConfig c;
  c.alpha = required(j, "alpha");
  c.a = required(j, "a");
  c.b = required(j, "b");
  c.s1 = weight_field(j, "s1");
  c.s2 = weight_field(j, "s2");
  c.precision_bits = integer_field(j, "precision_bits", c.precision_bits);
  c.quad_points = integer_field(j, "quad_points", c.quad_points);
  c.n_max = integer_field(j, "n_max", c.n_max);
  c.equilibrium_nodes = integer_field(j, "equilibrium_nodes", c.equilibrium_nodes);
  if (j.contains("name") && j.at("name").is_string()) c.name = j.at("name").get<std::string>();
  PrecisionGuard guard(c.precision_bits < 64 ? 64 : c.precision_bits);
  c.validate();
  return c;
}

StarConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

nlohmann::json to_json(const StarConfig& c) {
  auto w = [](const WeightParams& p) {
    return nlohmann::json{{"gamma", p.gamma}, {"delta", p.delta}, {"scale", p.scale}};
  };
  return nlohmann::json{{"name", c.name},
                        {"alpha", c.alpha},
                        {"a", c.a},
                        {"b", c.b},
                        {"s1", w(c.s1)},
                        {"s2", w(c.s2)},
                        {"precision_bits", c.precision_bits},
                        {"quad_points", c.quad_points},
                        {"n_max", c.n_max},
                        {"equilibrium_nodes", c.equilibrium_nodes}};
}

StarConfig reference_r1() {
  StarConfig c;
  c.name = "R1";
  c.alpha = "1";
  c.a = "1";
  c.b = "2";
  return c;
}

StarConfig reference_r0() {
  StarConfig c;
  c.name = "R0";
  c.alpha = "1";
  c.a = "1";
  c.b = "cbrt(2)";
  return c;
}

}  // namespace mop
