#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "test_support.hpp"
#include "whardy/quadrature.hpp"

using namespace whardy;
using whardy::testing::indicator_fn;
using whardy::testing::power_fn;
using whardy::testing::rel_err;

constexpr double kPi = std::numbers::pi;

TEST(UnitBall, ClosedFormValues) {
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-15);
  EXPECT_NEAR(unit_ball_volume(2), kPi, 1e-14);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * kPi / 3.0, 1e-14);
  EXPECT_NEAR(unit_ball_volume(4), 4.93480220054468, 1e-13);
  EXPECT_THROW(unit_ball_volume(0), std::invalid_argument);
}

TEST(UnitBall, MonteCarloHitCountingInDimensionFour) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const std::size_t N = 10'000'000;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < N; ++i) {
    double s = 0.0;
    for (int d = 0; d < 4; ++d) {
      const double x = U(rng);
      s += x * x;
    }
    hits += s < 1.0;
  }
  const double mc = 16.0 * static_cast<double>(hits) / static_cast<double>(N);
  EXPECT_LT(rel_err(unit_ball_volume(4), mc), 0.01);
}

TEST(UnitSphere, AreaIsDimensionTimesVolume) {
  EXPECT_NEAR(unit_sphere_area(1), 2.0, 1e-15);
  EXPECT_NEAR(unit_sphere_area(2), 6.28318530717959, 1e-13);
  EXPECT_NEAR(unit_sphere_area(3), 12.5663706143592, 1e-12);
}

TEST(LogGrid, GeometricNodes) {
  const auto g = make_log_grid(1, 1.0, 4.0, 3);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g.node(0), 1.0);
  EXPECT_NEAR(g.node(1), 2.0, 1e-14);
  EXPECT_DOUBLE_EQ(g.node(2), 4.0);

  const auto h = make_log_grid(2, 1e-3, 1e3, 601);
  ASSERT_EQ(h.size(), 601u);
  for (std::size_t k = 0; k + 1 < h.size(); ++k) EXPECT_NEAR(h.node(k + 1) / h.node(k), std::pow(10.0, 0.01), 1e-12);

  const auto d = default_grid(1);
  EXPECT_EQ(d.size(), 400u);
  EXPECT_DOUBLE_EQ(d.r_min(), 1e-6);
  EXPECT_DOUBLE_EQ(d.r_max(), 1e6);
}

TEST(LogGrid, RejectsInvalidBounds) {
  EXPECT_THROW(make_log_grid(1, 0.0, 1.0, 20), std::invalid_argument);
  EXPECT_THROW(make_log_grid(1, 2.0, 1.0, 20), std::invalid_argument);
  EXPECT_THROW(make_log_grid(1, 1.0, 2.0, 1), std::invalid_argument);
  EXPECT_THROW(RadialGrid(0, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(RadialGrid(1, {1.0, 1.0}), std::invalid_argument);
}

TEST(LogGrid, InsertingNodesSnapsNearNeighbours) {
  const auto g = make_log_grid(1, 1.0, 1024.0, 11);  // powers of two
  const auto h = g.with_nodes({3.0, 2.0 * 1.001});
  EXPECT_TRUE(h.find_node(3.0).has_value());
  EXPECT_TRUE(h.find_node(2.002).has_value());
  EXPECT_FALSE(h.find_node(2.0).has_value());
  EXPECT_EQ(h.size(), 12u);
}

TEST(BallIntegral, ClosedFormExamples) {
  const auto g2 = default_grid(2).with_nodes({2.0});
  EXPECT_LT(rel_err(ball_integral(RadialFunction::constant(g2, 1.0), 2.0), 4.0 * kPi), 1e-8);

  const auto g3 = default_grid(3);
  EXPECT_LT(rel_err(ball_integral(power_fn(g3, 2.0), 1.0), 4.0 * kPi / 5.0), 1e-8);

  const auto g1 = default_grid(1);
  EXPECT_LT(rel_err(ball_integral(power_fn(g1, -0.5), 1.0), 4.0), 1e-8);
}

TEST(BallIntegral, NodeAndOffNodeRadiiAgreeForPowerLaws) {
  const auto g = make_log_grid(2, 1e-3, 1e3, 50);
  const auto f = power_fn(g, 1.5);
  for (double t : {0.0005, 0.37, 1.0, 5.5, 999.0, 2000.0}) {
    const double exact = 2.0 * kPi * std::pow(t, 3.5) / 3.5;
    EXPECT_LT(rel_err(ball_integral(f, t), exact), 1e-12) << t;
  }
}

TEST(BallIntegral, DivergesAtOriginForStrongSingularity) {
  const auto g = default_grid(1);
  EXPECT_THROW(ball_integral(power_fn(g, -1.0), 1.0), DivergenceError);
  EXPECT_THROW(ball_integral(power_fn(g, -1.5), 1.0), DivergenceError);
}

TEST(TailIntegral, ExponentialOnFineGrid) {
  const auto g = make_log_grid(1, 1e-6, 60.0, 6000);
  const auto f = RadialFunction::sample(g, [](double r) { return std::exp(-2.0 * r); }, {}, 0.0);
  EXPECT_LT(rel_err(tail_integral(f, 0.0), 1.0), 1e-8);
}

TEST(TailIntegral, PowerLawAndDivergence) {
  const auto g = default_grid(1);
  EXPECT_LT(rel_err(tail_integral(power_fn(g, -3.0), 1.0), 1.0), 1e-8);
  EXPECT_THROW(tail_integral(RadialFunction::constant(g, 1.0), 1.0), DivergenceError);
  // untagged constant: divergence detected from the decade contributions / inferred tail
  const auto c = RadialFunction(g, std::vector<double>(g.size(), 1.0));
  try {
    tail_integral(c, 5.0);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_TRUE(std::isnan(e.last_contribution()) || e.last_contribution() >= e.previous_contribution());
  }
}

TEST(TailIntegral, DecadeTestCarriesContributions) {
  // growing inside the grid but tagged with a decaying tail: only the decade test can see it
  const auto g = default_grid(1);
  const auto f = RadialFunction::sample(g, [](double r) { return std::sqrt(r); }, {}, 0.5, -3.0);
  try {
    tail_integral(f, 1.0);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.last_contribution(), e.previous_contribution());
    EXPECT_GT(e.previous_contribution(), 0.0);
  }
}

TEST(Cumulative, MatchesClosedFormsAndBallIntegral) {
  const auto g = default_grid(1);
  const auto one = cumulative_ball_integrals(RadialFunction::constant(g, 1.0));
  const auto lin = cumulative_ball_integrals(power_fn(g, 1.0));
  const auto sing = cumulative_ball_integrals(power_fn(g, -0.5));
  for (std::size_t k = 0; k < g.size(); k += 7) {
    const double r = g.node(k);
    EXPECT_LT(rel_err(one.value(k), 2.0 * r), 1e-12);
    EXPECT_LT(rel_err(lin.value(k), r * r), 1e-12);
    EXPECT_LT(rel_err(sing.value(k), 4.0 * std::sqrt(r)), 1e-12);
    EXPECT_LT(rel_err(sing.value(k), ball_integral(power_fn(g, -0.5), r)), 1e-12);
  }
}

TEST(Cumulative, ConsistentWithBallIntegralForGenericFunctions) {
  std::mt19937_64 rng(7);
  const auto g = make_log_grid(2, 1e-4, 1e4, 300);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = whardy::testing::random_fn(g, rng, 0.5, -4.0);
    const auto G = cumulative_ball_integrals(f);
    for (std::size_t k = 0; k < g.size(); k += 13) EXPECT_LT(rel_err(G.value(k), ball_integral(f, g.node(k))), 1e-12);
  }
}

// --- invariants -------------------------------------------------------------

TEST(RadialCoreProperties, BallPlusTailIsTotal) {
  std::mt19937_64 rng(11);
  const auto g = make_log_grid(3, 1e-4, 1e4, 300);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = whardy::testing::random_fn(g, rng, -1.0, -5.0);
    const double total = tail_integral(f, 0.0);
    for (double t : {1e-3, 0.2, 1.0, 17.0, 400.0})
      EXPECT_LT(rel_err(ball_integral(f, t) + tail_integral(f, t), total), 1e-9);
  }
}

TEST(RadialCoreProperties, BallIntegralMonotoneInRadius) {
  std::mt19937_64 rng(12);
  const auto g = make_log_grid(2, 1e-3, 1e3, 200);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = whardy::testing::random_fn(g, rng, 0.0, -3.0);
    double prev = 0.0;
    for (double t = 1e-4; t < 1e4; t *= 1.37) {
      const double b = ball_integral(f, t);
      EXPECT_GE(b, prev);
      prev = b;
    }
  }
}

TEST(RadialCoreProperties, Linearity) {
  std::mt19937_64 rng(13);
  const auto g = make_log_grid(1, 1e-3, 1e3, 400);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f1 = whardy::testing::random_fn(g, rng, 0.0, -3.0);
    const auto f2 = whardy::testing::random_fn(g, rng, 0.0, -3.0);
    for (double t : {0.01, 1.0, 50.0}) {
      // scaling is exact
      EXPECT_LT(rel_err(ball_integral(scale(f1, 3.5), t), 3.5 * ball_integral(f1, t)), 1e-12);
      // sums are reconstructed in log space, so additivity holds to the discretisation error
      const auto e1 = integrate_with_error(f1, 0.0, t);
      const auto e2 = integrate_with_error(f2, 0.0, t);
      const auto es = integrate_with_error(add(f1, f2, 2.0, 0.5), 0.0, t);
      EXPECT_LE(std::abs(es.value - (2.0 * e1.value + 0.5 * e2.value)), 2.0 * e1.error + 0.5 * e2.error + es.error + 1e-14);
    }
  }
}

TEST(RadialCoreProperties, ResolutionDoublingWithinErrorEstimate) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const auto coarse = make_log_grid(2, 1e-3, 1e3, 120);
    const auto fine = make_log_grid(2, 1e-3, 1e3, 239);
    std::mt19937_64 r1 = rng, r2 = rng;
    const auto fc = whardy::testing::random_fn(coarse, r1, 0.0, -4.0);
    const auto ff = whardy::testing::random_fn(fine, r2, 0.0, -4.0);
    rng.discard(8);
    const auto ec = integrate_with_error(fc, 0.0, std::numeric_limits<double>::infinity());
    const auto ef = integrate_with_error(ff, 0.0, std::numeric_limits<double>::infinity());
    EXPECT_LT(std::abs(ec.value - ef.value), 4.0 * ec.error);
  }
}

TEST(RadialCoreProperties, JumpsAreIntegratedExactly) {
  const auto g = default_grid(1).with_nodes({4.0});
  EXPECT_LT(rel_err(tail_integral(indicator_fn(g, 0.0, 4.0), 0.0), 8.0), 1e-12);
  const auto g3 = default_grid(3).with_nodes({0.5, 2.0});
  EXPECT_LT(rel_err(tail_integral(indicator_fn(g3, 0.5, 2.0), 0.0), 4.0 * kPi / 3.0 * (8.0 - 0.125)), 1e-12);
}
