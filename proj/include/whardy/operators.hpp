#pragma once

// The Hardy operator, its dual, the geometric mean operator and power means on
// radial functions, with the dyadic annuli and kernel majorants used to reduce
// sublinear operators to Hardy bounds.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "whardy/quadrature.hpp"

namespace whardy {

namespace detail {

inline void require_nonnegative(const RadialFunction& f, const char* who) {
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f.left(k) < 0.0 || f.right(k) < 0.0) throw std::invalid_argument(std::string(who) + ": f must be non-negative");
}

inline void require_positive(const RadialFunction& f, const char* who) {
  for (std::size_t k = 0; k < f.size(); ++k)
    if (!(f.left(k) > 0.0) || !(f.right(k) > 0.0)) throw std::domain_error(std::string(who) + ": f must be strictly positive");
}

/// x -> c(x) / |B(0,|x|)| at every node.
inline std::vector<double> ball_averages(std::span<const double> integrals, const RadialGrid& g) {
  std::vector<double> out(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = integrals[k] / ball_volume(g.dimension(), g.node(k));
  return out;
}

}  // namespace detail

/// Hf(x) = integral of f over |y| < |x|.
inline RadialFunction hardy(const RadialFunction& f) {
  detail::require_nonnegative(f, "hardy");
  return cumulative_ball_integrals(f);
}

/// H*f(x) = integral of f over |y| > |x|.
inline RadialFunction dual_hardy(const RadialFunction& f) {
  detail::require_nonnegative(f, "dual_hardy");
  return cumulative_tail_integrals(f);
}

/// Gf(x) = exp of the mean of ln f over B(0, |x|).
inline RadialFunction geometric_mean(const RadialFunction& f) {
  detail::require_positive(f, "geometric_mean");
  const auto L = cumulative_log_integrals(f);
  auto avg = detail::ball_averages(L, f.grid());
  for (double& v : avg) v = std::exp(v);
  return RadialFunction(f.grid(), std::move(avg), f.tail_low(), f.tail_high());
}

/// (mean of f^beta over B(0, |x|))^{1/beta}; tends to Gf as beta -> 0.
inline RadialFunction power_mean_operator(const RadialFunction& f, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("power_mean_operator: beta must be positive");
  detail::require_nonnegative(f, "power_mean_operator");
  const auto S = cumulative_ball_integrals(pow(f, beta));
  auto avg = detail::ball_averages(S.values(), f.grid());
  for (double& v : avg) v = v > 0.0 ? std::exp(std::log(v) / beta) : 0.0;
  return RadialFunction(f.grid(), std::move(avg), f.tail_low(), f.tail_high());
}

/// A set of radii {r : lo < r <= hi} (lo_closed includes lo, used for lo = 0).
struct RadiusInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;

  bool contains(double r) const { return (lo_closed ? r >= lo : r > lo) && r <= hi; }
  bool operator==(const RadiusInterval&) const = default;
};

struct DyadicSets {
  RadiusInterval E;   ///< (2^k, 2^{k+1}]
  RadiusInterval E1;  ///< [0, 2^{k-1}]
  RadiusInterval E2;  ///< (2^{k-1}, 2^{k+2}]
  RadiusInterval E3;  ///< (2^{k-1}, inf)
};

inline DyadicSets dyadic_sets(int k) {
  const double inf = std::numeric_limits<double>::infinity();
  return {{std::ldexp(1.0, k), std::ldexp(1.0, k + 1), false},
          {0.0, std::ldexp(1.0, k - 1), true},
          {std::ldexp(1.0, k - 1), std::ldexp(1.0, k + 2), false},
          {std::ldexp(1.0, k - 1), inf, false}};
}

/// The unique k with 2^k < r <= 2^{k+1}.
inline int dyadic_index(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("dyadic_index: r must be positive and finite");
  int e = 0;
  const double m = std::frexp(r, &e);  // r = m 2^e, m in [1/2, 1)
  return m == 0.5 ? e - 2 : e - 1;
}

struct KernelBounds {
  RadialFunction T1_bound;  ///< 2^n |x|^{-n} Hf(x)
  RadialFunction T3_bound;  ///< 2^n H*(f |y|^{-n})(x)
};

inline KernelBounds kernel_bound_operator(const RadialFunction& f) {
  detail::require_nonnegative(f, "kernel_bound_operator");
  const int n = f.dimension();
  const double c = std::ldexp(1.0, n);
  const RadialGrid& g = f.grid();
  const auto H = hardy(f);
  RadialFunction::Tail t1_low, t1_high;
  if (H.tail_low()) t1_low = *H.tail_low() - n;
  auto t1 = map(H, [&](double r, double v) { return c * v * std::pow(r, -n); }, t1_low, t1_high);
  const auto weighted = multiply(f, RadialFunction::sample(g, [&](double r) { return std::pow(r, -n); }, {}, -n, -n));
  auto t3 = scale(dual_hardy(weighted), c);
  return {std::move(t1), std::move(t3)};
}

/// A named radial operator.
struct Operator {
  std::string name;
  std::function<RadialFunction(const RadialFunction&)> apply;

  RadialFunction operator()(const RadialFunction& f) const { return apply(f); }
};

inline Operator hardy_operator() { return {"hardy", [](const RadialFunction& f) { return hardy(f); }}; }
inline Operator dual_hardy_operator() { return {"dual_hardy", [](const RadialFunction& f) { return dual_hardy(f); }}; }
inline Operator geometric_mean_operator() {
  return {"geometric_mean", [](const RadialFunction& f) { return geometric_mean(f); }};
}
inline Operator power_mean(double beta) {
  return {"power_mean(" + std::to_string(beta) + ")", [beta](const RadialFunction& f) { return power_mean_operator(f, beta); }};
}
inline Operator zero_operator() {
  return {"zero", [](const RadialFunction& f) { return RadialFunction::constant(f.grid(), 0.0); }};
}

}  // namespace whardy
