#include <gtest/gtest.h>

#include <cmath>

#include "whardy/config.hpp"

using namespace whardy;

TEST(ConfigParse, Weights) {
  EXPECT_DOUBLE_EQ(parse_weight("power(-1, 0.5)")(4.0), 0.125);
  EXPECT_DOUBLE_EQ(parse_weight("exp(-2)")(1.0), std::exp(-2.0));
  EXPECT_DOUBLE_EQ(parse_weight("indicator(0, 1)")(0.5), 1.0);
  EXPECT_DOUBLE_EQ(parse_weight("indicator(0, 1)")(2.0), 0.0);
  EXPECT_DOUBLE_EQ(parse_weight("indicator(1, inf)")(1e9), 1.0);
  EXPECT_DOUBLE_EQ(parse_weight("product(power(2), const(3))")(2.0), 12.0);
  EXPECT_DOUBLE_EQ(parse_weight("2.5")(7.0), 2.5);
  EXPECT_EQ(parse_weight("indicator(0.5, 2)").breakpoints(), (std::vector<double>{0.5, 2.0}));
  EXPECT_THROW(parse_weight("power("), ConfigError);
  EXPECT_THROW(parse_weight("cosh(1)"), ConfigError);
  EXPECT_THROW(parse_weight("indicator(2, 1)"), ConfigError);
  EXPECT_THROW(parse_weight("power(1) x"), ConfigError);
}

TEST(ConfigParse, SpacesAndExponents) {
  const GridParams gp{};
  const auto s = parse_space(json{{"space", "variable_lebesgue"}, {"q", "step(2, 1, 4)"}}, 1, gp);
  EXPECT_EQ(s.breakpoints(), (std::vector<double>{1.0}));
  const auto m = parse_space(json{{"space", "musielak_orlicz"}, {"phi", "variable(ramp(2, 3))"}}, 1, gp);
  const auto range = std::get<SpaceSpec::MusielakOrlicz>(m.family).phi.exponent_range();
  ASSERT_TRUE(range.has_value());
  EXPECT_GE(range->first, 2.0);
  EXPECT_LE(range->second, 3.0);
  EXPECT_THROW(parse_space(json{{"space", "lebesgue"}}, 1, gp), ConfigError);
  EXPECT_THROW(parse_space(json{{"space", "lebesgue"}, {"p", 0.5}}, 1, gp), ConfigError);
  EXPECT_THROW(parse_space(json{{"space", "sobolev"}, {"p", 2}}, 1, gp), ConfigError);
}

TEST(ConfigParse, OperatorsAndParams) {
  EXPECT_EQ(parse_operator("hardy").name, "hardy");
  EXPECT_EQ(parse_operator("geometric_mean").name, "geometric_mean");
  EXPECT_THROW(parse_operator("power_mean(0)"), ConfigError);
  EXPECT_THROW(parse_operator("laplace"), ConfigError);
  auto c = parse_config(json{{"operator", "geometric_mean"}, {"source", {{"p", 2}}}, {"params", {1.5}}});
  EXPECT_NO_THROW(finalize_config(c));
  c.params = {2.0};
  EXPECT_THROW(finalize_config(c), ConfigError);
  c = parse_config(json{{"operator", "hardy"}, {"params", {0.0}}});
  EXPECT_THROW(finalize_config(c), ConfigError);
  EXPECT_THROW(parse_config(json{{"family", {{{"kind", "extremal"}, {"params", {1.0}}}}}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"n", "two"}}), ConfigError);
}

TEST(ConfigParse, ResolvedConfigRoundTrips) {
  auto c = parse_config(json{{"n", 2}, {"grid", {{"points", 300}}}, {"operator", "dual_hardy"}, {"params", {0.25, 0.5}}});
  finalize_config(c);
  const auto again = parse_config(config_to_json(c));
  EXPECT_EQ(config_to_json(again), config_to_json(c));
  EXPECT_EQ(again.grid.points, 300u);
}

TEST(Report, JsonSchemaAndCsv) {
  Report r;
  r.config = json{{"n", 1}};
  CriterionReport ok;
  ok.name = "A";
  ok.param = 0.5;
  ok.value = 1.25;
  ok.finite = true;
  ok.argmax_t = 2.0;
  ok.stability = 1.0;
  CriterionReport bad = ok;
  bad.param = 0.75;
  bad.value = kInf;
  bad.finite = false;
  bad.argmax_t = std::nan("");
  r.results = {ok, bad};
  r.bounds = BoundsReport{};
  r.estimate = EstimateReport{};
  r.checks.push_back({"sandwich", true, "ok"});
  const auto j = report_to_json(r);
  EXPECT_EQ(j.begin().key(), "schema");
  EXPECT_EQ(j["schema"], 1);
  for (const char* k : {"config", "results", "bounds", "estimate", "checks"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["results"][0]["value"], 1.25);
  EXPECT_EQ(j["results"][1]["value"], "divergent");
  EXPECT_TRUE(j["results"][1]["argmax_t"].is_null());
  EXPECT_EQ(j["results"][0]["params"]["alpha"], 0.5);
  EXPECT_TRUE(j["bounds"].contains("M"));
  EXPECT_TRUE(j["estimate"].contains("member"));
  EXPECT_EQ(report_to_csv(r), "param,value,argmax_t,stability\n0.5,1.25,2,1\n0.75,divergent,,1\n");
}
