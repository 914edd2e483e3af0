#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "whardy/powerlaw.hpp"

using namespace whardy;
using whardy::testing::rel_err;

TEST(Balance, Examples) {
  for (double mu : {-0.5, 0.0, 0.7})
    for (double d : {-0.2, 0.0, 0.3}) {
      const auto f = balance_check(d, mu, 1, 2.0, 3.0);
      EXPECT_EQ(f.paper_literal, f.scaling_consistent);
    }
  const auto f = balance_check(1.0, 1.0, 2, 2.0, 2.0);
  EXPECT_TRUE(f.scaling_consistent);
  EXPECT_FALSE(f.paper_literal);
  const auto z = balance_check(0.0, 0.0, 3, 2.5, 2.5);
  EXPECT_TRUE(z.paper_literal);
  EXPECT_TRUE(z.scaling_consistent);
}

TEST(Corollary2, Examples) {
  EXPECT_NEAR(corollary2_bounds(0.0, 0.0, 1, 1.0, 1.0).upper, 2.71828183, 1e-8);
  for (double p : {1.0, 2.0, 3.0})
    for (double mu : {-0.3, 0.0, 0.4}) EXPECT_LT(rel_err(corollary2_bounds(mu, mu, 1, p, p).upper, std::exp(mu + 1.0 / p)), 1e-12);
  EXPECT_THROW(corollary2_bounds(0.5, 0.0, 1, 2.0, 2.0), std::invalid_argument);
  EXPECT_THROW(corollary2_bounds(0.0, 0.0, 1, 3.0, 2.0), std::invalid_argument);
}

TEST(Corollary2, LowerBelowUpperOnSweep) {
  const double ps[] = {1.0, 1.5, 2.0, 3.0, 4.0};
  for (int n = 1; n <= 3; ++n)
    for (double p : ps)
      for (double q : ps) {
        if (q < p) continue;
        const double delta = n / p - n / q;
        const auto b = corollary2_bounds(delta, 0.0, n, p, q);
        EXPECT_LE(b.lower, b.upper * (1 + 1e-12)) << n << " " << p << " " << q;
        EXPECT_GT(b.lower, 0.0);
      }
}

TEST(Remark3, Examples) {
  EXPECT_NEAR(remark3_sharp_constant(0.0, 1, 2.0), 1.64872127, 1e-8);
  EXPECT_NEAR(remark3_sharp_constant(0.0, 1, 1.0), 2.71828183, 1e-8);
  for (int n = 1; n <= 3; ++n) EXPECT_LT(rel_err(remark3_sharp_constant(n * n, n, 1.0), std::exp(2.0) / n), 1e-12);
}

TEST(Remark3, InsideCorollary2Bounds) {
  for (int n = 1; n <= 3; ++n)
    for (double p : {1.0, 2.0, 3.0})
      for (double mu : {-0.5, 0.0, 1.0}) {
        const auto b = corollary2_bounds(mu, mu, n, p, p);
        const double c = remark3_sharp_constant(mu, n, p);
        EXPECT_GE(c, b.lower - 1e-9) << n << " " << p << " " << mu;
        EXPECT_LE(c, b.upper + 1e-9) << n << " " << p << " " << mu;
      }
}

TEST(PowerG, Examples) {
  for (double t : {0.01, 1.0, 50.0}) {
    EXPECT_LT(rel_err(power_g(0.0, 2.0, 1, t), 2 * t), 1e-14);
    EXPECT_LT(rel_err(power_g(0.25, 2.0, 1, t), 4 * std::sqrt(t)), 1e-14);
  }
  EXPECT_THROW(power_g(1.0, 2.0, 1, 1.0), DivergenceError);
}

TEST(PowerG, MatchesQuadrature) {
  for (int n = 1; n <= 3; ++n)
    for (double mu : {-0.5, 0.0, 0.3}) {
      const double p = 2.0;
      const auto g = default_grid(n);
      const auto G = cumulative_ball_integrals(WeightSpec::power(mu).sample(g, -p / (p - 1.0)));
      for (std::size_t k = 0; k < g.size(); ++k) ASSERT_LT(rel_err(G.value(k), power_g(mu, p, n, g.node(k))), 1e-8) << n << " " << mu << " " << k;
    }
}

TEST(BalanceExperiment, StableOnlyUnderScalingBalance) {
  CriterionOptions o;
  const auto ok = balance_experiment(0.3, 0.3, 2, 2.0, 2.0, 1.75, o);
  EXPECT_TRUE(ok.flags.scaling_consistent);
  EXPECT_FALSE(ok.flags.paper_literal);
  EXPECT_TRUE(ok.stable) << ok.report.stability;
  for (double d : {-0.5, 0.5}) {
    const auto bad = balance_experiment(0.3 + d, 0.3, 2, 2.0, 2.0, 1.75, o);
    EXPECT_FALSE(bad.flags.scaling_consistent);
    EXPECT_LT(bad.report.stability, 0.5) << d;
  }
}
