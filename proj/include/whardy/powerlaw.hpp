#pragma once

// Closed forms for pure power weights v = |y|^mu (source) and |x|^delta
// (target) used to cross-check the numerical criteria.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "whardy/criteria.hpp"
#include "whardy/grid.hpp"
#include "whardy/search.hpp"

namespace whardy {

inline constexpr double kBalanceTolerance = 1e-12;

struct BalanceFlags {
  bool paper_literal = false;       ///< delta + n/q = mu/n + n/p
  bool scaling_consistent = false;  ///< delta + n/q = mu + n/p, forced by dilation invariance
};

inline BalanceFlags balance_check(double delta, double mu, int n, double p, double q) {
  if (!(p > 0.0) || !(q > 0.0) || n < 1) throw std::invalid_argument("balance_check: need p, q > 0 and n >= 1");
  const double lhs = delta + n / q;
  return {std::abs(lhs - (mu / n + n / p)) <= kBalanceTolerance, std::abs(lhs - (mu + n / p)) <= kBalanceTolerance};
}

struct Corollary2Bounds {
  double lower = 0.0;
  double upper = 0.0;
  double argmax_s = 0.0;
};

/// Two-sided bounds on the best constant for G between power-weighted
/// Lebesgue spaces. The sup over s is taken on (1, 50].
inline Corollary2Bounds corollary2_bounds(double delta, double mu, int n, double p, double q) {
  if (!(p > 0.0) || !(p <= q) || !std::isfinite(q)) throw std::invalid_argument("corollary2_bounds: need 0 < p <= q < inf");
  if (!balance_check(delta, mu, n, p, q).scaling_consistent)
    throw std::invalid_argument("corollary2_bounds: balance condition violated");
  const double vb = std::pow(unit_ball_volume(n), 1.0 / q - 1.0 / p);
  const double em = std::exp(mu / (n * static_cast<double>(n)));
  auto phi = [&](double s) {
    const double u = s - 1.0;
    // e^{s/p} / [(s-1)e^s + 1]^{1/p} written as [e^s / ((s-1)e^s + 1)]^{1/p}
    const double core = std::pow(1.0 / (u + std::exp(-s)), 1.0 / p);
    return core * std::pow(u, 1.0 / p - 1.0 / q);
  };
  const auto best = golden_section_max(phi, 1.0, 50.0, 120);
  Corollary2Bounds out;
  out.argmax_s = best.x;
  out.lower = std::pow(p / (n * q), 1.0 / q) * em * vb * best.value;
  out.upper = vb * std::exp(mu / (n * static_cast<double>(n)) + 1.0 / q) / std::pow(n, 1.0 / q);
  return out;
}

inline double remark3_sharp_constant(double mu, int n, double p) {
  return std::exp(mu / (n * static_cast<double>(n)) + 1.0 / p) / std::pow(n, 1.0 / p);
}

/// g(t) = integral of |y|^{-mu p'} over |y| < t.
inline double power_g(double mu, double p, int n, double t) {
  if (!(p > 1.0)) throw std::invalid_argument("power_g: need p > 1");
  const double e = n - mu * p / (p - 1.0);
  if (!(e > 0.0)) throw DivergenceError("power_g: |y|^{-mu p'} is not integrable at the origin");
  return unit_sphere_area(n) * std::pow(t, e) / e;
}

struct BalanceExperiment {
  double delta = 0.0;
  double mu = 0.0;
  double s = 0.0;
  BalanceFlags flags;
  CriterionReport report;
  bool stable = false;  ///< finite with stability >= 0.99
};

/// criterion_D for v = |y|^mu and target L_q with weight |x|^delta.
inline BalanceExperiment balance_experiment(double delta, double mu, int n, double p, double q, double s,
                                            const CriterionOptions& opt) {
  BalanceExperiment out;
  out.delta = delta;
  out.mu = mu;
  out.s = s;
  out.flags = balance_check(delta, mu, n, p, q);
  CriterionOptions o = opt;
  o.n = n;
  out.report = criterion_D(s, p, WeightSpec::power(mu), SpaceSpec::lebesgue(q, WeightSpec::power(delta)), o);
  out.stable = out.report.finite && out.report.stability >= 0.99;
  return out;
}

}  // namespace whardy
