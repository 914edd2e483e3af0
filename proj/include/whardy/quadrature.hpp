#pragma once

// Integrals over balls, complements of balls and annuli of radial functions on R^n,
// reduced to one-dimensional quadrature in u = ln r.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "whardy/grid.hpp"
#include "whardy/radial_function.hpp"

namespace whardy {

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;  ///< |degree-5 rule - log-linear rule|, summed over segments
};

namespace detail {

inline constexpr double kTailDivergenceSlack = 1e-9;

/// omega * int_a^b r^{n-1} v0 (r/r0)^b dr with 0 <= a < b <= inf.
inline double power_tail(int n, double v0, double r0, double expo, double a, double b, const char* where) {
  if (v0 == 0.0 || !(b > a)) return 0.0;
  const double omega = unit_sphere_area(n);
  const double c = n + expo;
  if (a == 0.0 && c <= kTailDivergenceSlack)
    throw DivergenceError(std::string("integral diverges at the origin (") + where + ")");
  if (std::isinf(b) && c >= -kTailDivergenceSlack)
    throw DivergenceError(std::string("integral diverges at infinity (") + where + ")");
  const double scale = omega * v0 * std::pow(r0, n);
  if (std::abs(c) < 1e-12) return scale * std::log(b / a);
  const double pa = (a == 0.0) ? 0.0 : std::pow(a / r0, c);
  const double pb = std::isinf(b) ? 0.0 : std::pow(b / r0, c);
  return scale * (pb - pa) / c;
}

/// Sum over the part of the grid inside [a, b], plus optional log-linear variant.
inline void grid_part(const Interpolant& ip, double a, double b, double& sum, double* err) {
  const RadialGrid& g = ip.grid();
  const double lo = std::max(a, g.r_min());
  const double hi = std::min(b, g.r_max());
  if (!(hi > lo)) return;
  const std::size_t k0 = g.segment(lo);
  for (std::size_t k = k0; k + 1 < g.size(); ++k) {
    const double ra = std::max(lo, g.node(k));
    const double rb = std::min(hi, g.node(k + 1));
    if (ra >= hi) break;
    if (rb <= ra) continue;
    const double s = ip.integrate_segment(k, ra, rb);
    sum += s;
    if (err) *err += std::abs(s - ip.integrate_segment_loglinear(k, ra, rb));
  }
}

/// Decade test on the top three decades of the grid: positive, non-decreasing
/// contributions mean the tail does not decay.
inline void decade_test(const Interpolant& ip, double from) {
  const RadialGrid& g = ip.grid();
  const double top = g.r_max();
  if (from > top * 1e-3 || g.r_min() > top * 1e-3) return;
  double c[3] = {0.0, 0.0, 0.0};
  for (int d = 0; d < 3; ++d) {
    double s = 0.0;
    grid_part(ip, top * std::pow(10.0, d - 3), top * std::pow(10.0, d - 2), s, nullptr);
    c[d] = s;
  }
  if (c[0] > 0.0 && c[0] <= c[1] && c[1] <= c[2])
    throw DivergenceError("tail contributions fail to decay over the last three decades", c[1], c[2]);
}

inline double integrate_impl(const RadialFunction& g, double a, double b, double* err) {
  if (a < 0.0 || !(b > a)) {
    if (b == a) return 0.0;
    throw std::invalid_argument("integrate: require 0 <= a < b");
  }
  const Interpolant ip(g);
  const RadialGrid& grid = g.grid();
  const int n = grid.dimension();
  double sum = 0.0;
  if (a < grid.r_min())
    sum += power_tail(n, ip.low_anchor(), grid.r_min(), ip.low_exponent(), a, std::min(b, grid.r_min()), "below r_min");
  grid_part(ip, a, b, sum, err);
  if (b > grid.r_max()) {
    if (std::isinf(b)) decade_test(ip, a);
    sum += power_tail(n, ip.high_anchor(), grid.r_max(), ip.high_exponent(), std::max(a, grid.r_max()), b, "above r_max");
  }
  return sum;
}

}  // namespace detail

/// Integral of g(|y|) over the shell a < |y| < b in R^n (b may be infinite).
inline double integrate(const RadialFunction& g, double a, double b) { return detail::integrate_impl(g, a, b, nullptr); }

inline IntegralEstimate integrate_with_error(const RadialFunction& g, double a, double b) {
  IntegralEstimate e;
  e.value = detail::integrate_impl(g, a, b, &e.error);
  return e;
}

/// Integral of g(|y|) over |y| < t.
inline double ball_integral(const RadialFunction& g, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("ball_integral: t must be positive");
  return integrate(g, 0.0, t);
}

/// Integral of g(|y|) over |y| > t (t = 0 gives the whole space).
inline double tail_integral(const RadialFunction& g, double t) {
  if (t < 0.0) throw std::invalid_argument("tail_integral: t must be non-negative");
  return integrate(g, t, std::numeric_limits<double>::infinity());
}

/// G(r_k) = ball_integral(g, r_k) at every node, by one prefix pass.
/// Breaks of g become kinks of G.
inline RadialFunction cumulative_ball_integrals(const RadialFunction& g) {
  const Interpolant ip(g);
  const RadialGrid& grid = g.grid();
  const int n = grid.dimension();
  const std::size_t K = grid.size();
  std::vector<double> out(K);
  double acc = detail::power_tail(n, ip.low_anchor(), grid.r_min(), ip.low_exponent(), 0.0, grid.r_min(), "below r_min");
  out[0] = acc;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    acc += ip.integrate_segment(k, grid.node(k), grid.node(k + 1));
    out[k + 1] = acc;
  }
  std::vector<unsigned char> br(g.breaks().begin(), g.breaks().end());
  RadialFunction::Tail low, high;
  if (g.tail_low()) low = n + *g.tail_low();
  // beyond r_max, G = const + c r^{n+b}; keep the dominant power
  if (ip.high_anchor() == 0.0) high = 0.0;
  else if (g.tail_high()) high = std::max(0.0, n + *g.tail_high());
  return RadialFunction(grid, out, out, std::move(br), low, high);
}

/// T(r_k) = tail_integral(g, r_k) at every node, by one suffix pass.
inline RadialFunction cumulative_tail_integrals(const RadialFunction& g) {
  const Interpolant ip(g);
  const RadialGrid& grid = g.grid();
  const int n = grid.dimension();
  const std::size_t K = grid.size();
  detail::decade_test(ip, 0.0);
  std::vector<double> out(K);
  double acc = detail::power_tail(n, ip.high_anchor(), grid.r_max(), ip.high_exponent(), grid.r_max(),
                                  std::numeric_limits<double>::infinity(), "above r_max");
  out[K - 1] = acc;
  for (std::size_t k = K - 1; k-- > 0;) {
    acc += ip.integrate_segment(k, grid.node(k), grid.node(k + 1));
    out[k] = acc;
  }
  std::vector<unsigned char> br(g.breaks().begin(), g.breaks().end());
  RadialFunction::Tail low, high;
  if (g.tail_high()) high = n + *g.tail_high();
  // below r_min, T = const - c r^{n+b}; keep the dominant power
  if (ip.low_anchor() == 0.0) low = 0.0;
  else if (g.tail_low()) low = std::min(0.0, n + *g.tail_low());
  return RadialFunction(grid, out, out, std::move(br), low, high);
}

/// L(r_k) = integral over |y| < r_k of ln f(|y|), for strictly positive f.
/// Uses the same log-space reconstruction as every other integral, so the
/// result is exact for power laws.
inline std::vector<double> cumulative_log_integrals(const RadialFunction& f) {
  if (!f.all_of([](double v) { return v > 0.0; }))
    throw std::domain_error("cumulative_log_integrals: samples must be strictly positive");
  const Interpolant ip(f);
  const RadialGrid& grid = f.grid();
  const int n = grid.dimension();
  const std::size_t K = grid.size();
  // below r_min: ln f = ln f0 + b (ln r - ln r0)
  const double r0 = grid.r_min();
  double acc = unit_sphere_area(n) * std::pow(r0, n) * (std::log(ip.low_anchor()) / n - ip.low_exponent() / (double(n) * n));
  std::vector<double> out(K);
  out[0] = acc;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    acc += ip.integrate_log_segment(k);
    out[k + 1] = acc;
  }
  return out;
}

}  // namespace whardy
