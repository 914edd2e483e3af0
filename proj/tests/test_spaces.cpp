#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "whardy/spaces.hpp"

using namespace whardy;
using whardy::testing::indicator_fn;
using whardy::testing::power_fn;
using whardy::testing::random_fn;
using whardy::testing::rel_err;

namespace {

// q = 2 on |x| < 1 and 4 outside
PhiFunction two_four_phi(const RadialGrid& g) {
  const double bp[] = {1.0};
  auto q = RadialFunction::sample(
      g, [](double r, Side s) { return (s == Side::left ? r <= 1.0 : r < 1.0) ? 2.0 : 4.0; }, bp);
  return PhiFunction::variable_power(q);
}

}  // namespace

TEST(Modular, Examples) {
  const auto g = default_grid(1).with_nodes({1.0, 2.0, 4.0});
  EXPECT_LT(rel_err(modular(PhiFunction::power(2), indicator_fn(g, 0.0, 4.0)), 8.0), 1e-12);
  EXPECT_EQ(modular(PhiFunction::power(2), RadialFunction::constant(g, 0.0)), 0.0);
  EXPECT_LT(rel_err(modular(two_four_phi(g), indicator_fn(g, 0.0, 2.0)), 4.0), 1e-8);
}

TEST(Modular, DivergenceIsAVerdict) {
  const auto g = default_grid(1);
  EXPECT_TRUE(std::isinf(modular(PhiFunction::power(2), power_fn(g, -1.0))));
}

TEST(Luxemburg, Examples) {
  const auto g = default_grid(1).with_nodes({1.0, 2.0, 4.0});
  EXPECT_NEAR(luxemburg_norm(PhiFunction::power(2), indicator_fn(g, 0.0, 4.0)), 2.82842712474619, 1e-9);
  EXPECT_EQ(luxemburg_norm(PhiFunction::power(2), RadialFunction::constant(g, 0.0)), 0.0);
  // independent scalar root solve of 2u^2 + 2u^4 = 1
  const double u2 = (std::sqrt(3.0) - 1.0) / 2.0;
  EXPECT_NEAR(luxemburg_norm(two_four_phi(g), indicator_fn(g, 0.0, 2.0)), 1.0 / std::sqrt(u2), 1e-5);
  EXPECT_NEAR(1.0 / std::sqrt(u2), 1.65289, 1e-5);
}

TEST(Luxemburg, UnboundedNormThrows) {
  const auto g = default_grid(1);
  EXPECT_THROW(luxemburg_norm(PhiFunction::power(2), power_fn(g, -1.0)), DivergenceError);
  EXPECT_TRUE(std::isinf(space_norm(power_fn(g, -1.0), SpaceSpec::musielak_orlicz(PhiFunction::power(2)))));
}

TEST(WeightedLebesgue, Examples) {
  const auto g = default_grid(1).with_nodes({1.0});
  const auto chi = indicator_fn(g, 0.0, 1.0);
  EXPECT_NEAR(weighted_lebesgue_norm(chi, 2.0), 1.4142135623731, 1e-12);
  EXPECT_NEAR(weighted_lebesgue_norm(chi, 2.0, WeightSpec::power(0.5)), 1.0, 1e-12);
  EXPECT_EQ(weighted_lebesgue_norm(RadialFunction::constant(g, 0.0), 2.0), 0.0);
}

TEST(SpaceNorm, Examples) {
  const auto g = default_grid(1).with_nodes({1.0, 4.0});
  EXPECT_NEAR(space_norm(indicator_fn(g, 0.0, 1.0), SpaceSpec::lebesgue(2)), 1.4142135623731, 1e-12);
  EXPECT_NEAR(space_norm(indicator_fn(g, 0.0, 4.0), SpaceSpec::musielak_orlicz(PhiFunction::power(2))), 2.82842712474619, 1e-9);
  const auto gd = make_log_grid(1, 1e-6, 60.0, 6000);
  const auto e = RadialFunction::sample(gd, [](double r) { return std::exp(-r); }, {}, 0.0);
  EXPECT_LT(rel_err(space_norm(e, SpaceSpec::musielak_orlicz(PhiFunction::power(3))), space_norm(e, SpaceSpec::lebesgue(3))), 1e-9);
}

TEST(SpaceNorm, WeightBreakpointsAreInsertedIntoTheGrid) {
  // the indicator weight jumps at 0.3, which is not a node of the grid
  const auto g = make_log_grid(1, 1e-3, 1e3, 97);
  ASSERT_FALSE(g.find_node(0.3).has_value());
  const auto one = RadialFunction::constant(g, 1.0);
  EXPECT_NEAR(space_norm(one, SpaceSpec::lebesgue(2, WeightSpec::indicator(0.0, 0.3))), std::sqrt(0.6), 1e-12);
  EXPECT_NEAR(space_norm(one, SpaceSpec::musielak_orlicz(PhiFunction::power(2), WeightSpec::indicator(0.0, 0.3))), std::sqrt(0.6), 1e-9);
}

TEST(Delta2, Examples) {
  const std::vector<double> xs = {1e-3, 0.5, 1.0, 3.0, 1e3};
  std::vector<double> ts;
  for (int i = -20; i <= 20; ++i) ts.push_back(std::pow(10.0, i / 5.0));
  const auto g = default_grid(1).with_nodes({1.0});
  const auto r2 = delta2_check(PhiFunction::power(2), xs, ts);
  EXPECT_TRUE(r2.satisfied);
  EXPECT_NEAR(r2.K_estimate, 4.0, 1e-12);
  const auto rq = delta2_check(two_four_phi(g), xs, ts);
  EXPECT_TRUE(rq.satisfied);
  EXPECT_LE(rq.K_estimate, 16.0 * (1 + 1e-12));
  std::vector<double> big;
  for (int t = 1; t <= 50; ++t) big.push_back(t);
  const auto ex = delta2_check(PhiFunction::custom([](double, double t) { return std::expm1(t); }, "exp(t)-1"), xs, big);
  EXPECT_FALSE(ex.satisfied);
  EXPECT_GT(ex.K_estimate, 1e6);
}

TEST(PowerCondition, Examples) {
  const auto g = default_grid(1).with_nodes({1.0});
  const std::vector<double> xs = {0.1, 0.5, 2.0, 10.0};
  const std::vector<double> ts = {1e-3, 0.1, 1.0, 10.0, 1e3};
  const std::vector<double> Cs = {1.5, 2.0, 4.0, 10.0};
  const auto phi = two_four_phi(g);
  const auto& q = *std::get<PhiFunction::VariablePower>(phi.kind()).q;
  EXPECT_TRUE(power_condition_check(phi, q, Cs, xs, ts));
  const double four[] = {4.0};
  EXPECT_FALSE(power_condition_check(PhiFunction::power(3), RadialFunction::constant(g, 2.0), four, xs, ts));
  const double one[] = {1.0};
  EXPECT_TRUE(power_condition_check(PhiFunction::power(3), RadialFunction::constant(g, 2.0), one, xs, ts));
}

TEST(PhiFunction, RejectsNonConvexOrNonVanishing) {
  EXPECT_THROW(PhiFunction::custom([](double, double t) { return std::sqrt(t); }, "sqrt"), std::invalid_argument);
  EXPECT_THROW(PhiFunction::custom([](double, double t) { return 1.0 + t; }, "affine"), std::invalid_argument);
  EXPECT_THROW(PhiFunction::power(0.5), std::invalid_argument);
  EXPECT_NO_THROW(PhiFunction::custom([](double x, double t) { return (1.0 + x) * t * t; }, "weighted square"));
}

TEST(Lemma1, Constants) {
  const auto g = default_grid(1);
  EXPECT_DOUBLE_EQ(lemma1_constant(2.0, RadialFunction::constant(g, 2.0), true, false), 1.0);
  const auto q24 = RadialFunction::sample(g, [](double r) { return r < 1.0 ? 2.0 : 4.0; });
  EXPECT_DOUBLE_EQ(lemma1_constant(2.0, q24, false, true), 1.5);
  EXPECT_DOUBLE_EQ(lemma1_constant(2.0, RadialFunction::constant(g, 3.0), false, true), 1.0);
  EXPECT_THROW(lemma1_constant(2.0, q24, false, false), std::invalid_argument);
}

TEST(MixedNorms, SeparableAndZero) {
  const auto gx = make_log_grid(1, 1e-4, 1e4, 160);
  const auto gy = make_log_grid(2, 1e-4, 1e4, 150);
  const auto outer = SpaceSpec::lebesgue(3.0);
  TwoVariableSamples z{gx, gy, std::vector<double>(gx.size() * gy.size(), 0.0)};
  const auto mz = mixed_norms(z, outer, 2.0);
  EXPECT_EQ(mz.outer_inner, 0.0);
  EXPECT_EQ(mz.inner_outer, 0.0);
}

TEST(ModularProbe, IdentityAndZero) {
  const auto g = default_grid(1).with_nodes({0.5, 2.0});
  const auto f = scale(indicator_fn(g, 0.5, 2.0), 1.0 / std::sqrt(3.0));  // unit L2 norm
  const std::vector<RadialFunction> samples = {f};
  const auto id = [](const RadialFunction& h) { return h; };
  const auto zero = [](const RadialFunction& h) { return RadialFunction::constant(h.grid(), 0.0); };
  EXPECT_NEAR(modular_boundedness_probe(id, PhiFunction::power(2), samples, 2.0), 1.0, 1e-12);
  EXPECT_EQ(modular_boundedness_probe(zero, PhiFunction::power(2), samples, 2.0), 0.0);
}

// --- invariants -------------------------------------------------------------

TEST(SpaceProperties, HomogeneityAndUnitBall) {
  std::mt19937_64 rng(31);
  const auto g = make_log_grid(2, 1e-4, 1e4, 250);
  const auto q = RadialFunction::sample(g, [](double r) { return 2.0 + 2.0 * r / (1.0 + r); });
  const std::vector<PhiFunction> phis = {PhiFunction::power(1.5), PhiFunction::variable_power(q),
                                         PhiFunction::custom([](double, double t) { return t * t + t * t * t * t; }, "t2+t4")};
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_fn(g, rng, 0.0, -3.0);
    for (const auto& phi : phis) {
      const double nf = luxemburg_norm(phi, f);
      EXPECT_LE(modular(phi, f, 1.0 / nf), 1.0 + 1e-8);
      for (double c : {0.5, 3.0, 10.0}) EXPECT_LT(rel_err(luxemburg_norm(phi, scale(f, c)), c * nf), 1e-8);
    }
  }
}

TEST(SpaceProperties, LatticeMonotone) {
  std::mt19937_64 rng(32);
  const auto g = make_log_grid(1, 1e-4, 1e4, 250);
  const std::vector<SpaceSpec> specs = {SpaceSpec::lebesgue(2.0), SpaceSpec::lebesgue(1.0, WeightSpec::power(0.3)),
                                        SpaceSpec::musielak_orlicz(PhiFunction::power(3.0), WeightSpec::exponential(-1.0)),
                                        SpaceSpec::variable_lebesgue(RadialFunction::sample(g, [](double r) { return r < 1 ? 2.0 : 3.0; }))};
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_fn(g, rng, 0.0, -3.0);
    const auto h = add(f, random_fn(g, rng, 0.0, -3.0));
    for (const auto& s : specs) EXPECT_LE(space_norm(f, s), space_norm(h, s)) << s.describe();
  }
}

TEST(SpaceProperties, LuxemburgMatchesLebesgueForPowers) {
  std::mt19937_64 rng(33);
  const auto g = make_log_grid(2, 1e-4, 1e4, 250);
  for (double p : {1.0, 2.0, 3.0, 3.5}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto f = random_fn(g, rng, 0.0, -3.0);
      const double lux = luxemburg_norm(PhiFunction::power(p), f);
      EXPECT_LT(rel_err(lux, weighted_lebesgue_norm(f, p)), 1e-9) << p;
      EXPECT_LE(modular(PhiFunction::power(p), f, 1.0 / lux), 1.0 + 1e-8);
    }
  }
}
