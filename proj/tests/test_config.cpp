#include "mop/config.hpp"

#include <gtest/gtest.h>

using mop::ConfigError;
using nlohmann::json;

namespace {

json base() {
  return json{{"alpha", "1"}, {"a", "1"}, {"b", "2"}, {"s1", {{"gamma", 0}, {"delta", 0}}},
              {"s2", {{"gamma", 0}, {"delta", 0}}}, {"precision_bits", 128}, {"quad_points", 96}, {"n_max", 30}};
}

std::string error_of(const json& j) {
  try {
    mop::parse_config(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, AcceptsReferenceConfigurations) {
  auto c = mop::parse_config(base());
  EXPECT_EQ(c.n_max, 30);
  mop::PrecisionGuard g(128);
  EXPECT_EQ(c.lambda(), mop::Real(15));
  EXPECT_EQ(c.mu(), mop::Real(3));
  auto r0 = mop::reference_r0();
  EXPECT_NO_THROW(r0.validate());
  EXPECT_LT(abs(r0.lambda() - 3), mop::Real("1e-35"));
}

TEST(Config, MissingKeyIsNamed) {
  for (const char* key : {"alpha", "a", "b"}) {
    json j = base();
    j.erase(key);
    EXPECT_NE(error_of(j).find(std::string("'") + key + "'"), std::string::npos) << key;
  }
}

TEST(Config, IntervalOrderViolated) {
  json j = base();
  j["b"] = "0.5";
  EXPECT_NE(error_of(j).find("interval order violated"), std::string::npos);
  j["b"] = "1";
  EXPECT_NE(error_of(j).find("interval order violated"), std::string::npos);
}

TEST(Config, RejectsBadParameters) {
  json j = base();
  j["alpha"] = "-1";
  EXPECT_FALSE(error_of(j).empty());
  j = base();
  j["s1"]["gamma"] = -1;
  EXPECT_FALSE(error_of(j).empty());
  j = base();
  j["s2"]["delta"] = "-0.5";
  EXPECT_FALSE(error_of(j).empty());
  j = base();
  j["s2"]["scale"] = 0;
  EXPECT_NE(error_of(j).find("identically zero"), std::string::npos);
  j = base();
  j["precision_bits"] = 32;
  EXPECT_FALSE(error_of(j).empty());
  j = base();
  j["quad_points"] = 40;  // below 2 n_max + 16
  EXPECT_FALSE(error_of(j).empty());
}

TEST(Config, CubeRootLiteral) {
  mop::PrecisionGuard g(200);
  mop::Real v = mop::parse_config_number("cbrt(2)", "b");
  EXPECT_LT(abs(v * v * v - 2), mop::Real("1e-58"));
  EXPECT_THROW(mop::parse_config_number("cbrt(x)", "b"), ConfigError);
  EXPECT_THROW(mop::parse_config_number("1.2.3", "b"), ConfigError);
}

TEST(Config, JsonRoundTrip) {
  auto c = mop::reference_r0();
  auto back = mop::parse_config(mop::to_json(c));
  EXPECT_EQ(back.b, c.b);
  EXPECT_EQ(back.precision_bits, c.precision_bits);
  EXPECT_EQ(back.n_max, c.n_max);
}
