#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "whardy/radial_function.hpp"

namespace whardy::testing {

/// c * r^a, tagged as an exact power law at both ends.
inline RadialFunction power_fn(const RadialGrid& g, double a, double c = 1.0) {
  return RadialFunction::sample(g, [&](double r) { return c * std::pow(r, a); }, {}, a, a);
}

/// 1 on (lo, hi), 0 elsewhere; lo and hi must be grid nodes for exactness.
inline RadialFunction indicator_fn(const RadialGrid& g, double lo, double hi) {
  const double bps[] = {lo, hi};
  return RadialFunction::sample(
      g,
      [&](double r, Side s) {
        const bool in = s == Side::left ? (lo < r && r <= hi) : (lo <= r && r < hi);
        return in ? 1.0 : 0.0;
      },
      bps, 0.0, 0.0);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Smooth positive random radial function: exp of a random sum of bumps in ln r,
/// multiplied by a power-law envelope r^{lo} near 0 and r^{hi} near infinity.
inline RadialFunction random_fn(const RadialGrid& g, std::mt19937_64& rng, double lo_exp, double hi_exp) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double a1 = U(rng), a2 = U(rng), c1 = 2 * U(rng), c2 = 2 * U(rng), s = 0.5 + 0.5 * std::abs(U(rng));
  return RadialFunction::sample(
      g,
      [&](double r) {
        const double u = std::log(r);
        const double env = std::pow(r, lo_exp) * std::pow(1.0 + r, hi_exp - lo_exp);
        const double bump = a1 * std::exp(-(u - c1) * (u - c1) / (2 * s * s)) + a2 * std::exp(-(u - c2) * (u - c2));
        return env * std::exp(bump);
      },
      {}, lo_exp, hi_exp);
}

}  // namespace whardy::testing
