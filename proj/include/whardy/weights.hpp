#pragma once

// Symbolic radial weights: power laws, exponentials, indicators of annuli,
// constants, tabulated samples and products of these.

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "whardy/radial_function.hpp"

namespace whardy {

class WeightSpec {
 public:
  struct Power {
    double exponent;
    double scale;
  };
  struct Exponential {
    double rate;  ///< w(r) = exp(rate * r)
  };
  struct Indicator {
    double a;  ///< w = 1 on a < r < b
    double b;
  };
  struct Constant {
    double c;
  };
  struct Tabulated {
    std::shared_ptr<const RadialFunction> f;
  };
  struct Product {
    std::vector<WeightSpec> factors;
  };
  using Kind = std::variant<Power, Exponential, Indicator, Constant, Tabulated, Product>;

  static WeightSpec power(double exponent, double scale = 1.0) {
    if (!(scale > 0.0)) throw std::invalid_argument("power weight: scale must be positive");
    return WeightSpec(Power{exponent, scale});
  }
  static WeightSpec exponential(double rate) { return WeightSpec(Exponential{rate}); }
  static WeightSpec indicator(double a, double b = std::numeric_limits<double>::infinity()) {
    if (!(a >= 0.0) || !(b > a)) throw std::invalid_argument("indicator weight: require 0 <= a < b");
    return WeightSpec(Indicator{a, b});
  }
  static WeightSpec constant(double c) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("constant weight: must be finite and >= 0");
    return WeightSpec(Constant{c});
  }
  static WeightSpec one() { return constant(1.0); }
  static WeightSpec tabulated(RadialFunction f) {
    if (!f.all_of([](double v) { return v >= 0.0; }))
      throw std::invalid_argument("tabulated weight: samples must be non-negative");
    return WeightSpec(Tabulated{std::make_shared<const RadialFunction>(std::move(f))});
  }
  static WeightSpec product(std::vector<WeightSpec> factors) {
    if (factors.empty()) return one();
    if (factors.size() == 1) return factors.front();
    return WeightSpec(Product{std::move(factors)});
  }

  const Kind& kind() const noexcept { return kind_; }

  /// ln w(r) from the given side; -inf where w vanishes.
  double log_value(double r, Side side = Side::left) const {
    return std::visit(
        [&](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          constexpr double ninf = -std::numeric_limits<double>::infinity();
          if constexpr (std::is_same_v<T, Power>) {
            return std::log(k.scale) + k.exponent * std::log(r);
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return k.rate * r;
          } else if constexpr (std::is_same_v<T, Indicator>) {
            const bool inside = side == Side::left ? (k.a < r && r <= k.b) : (k.a <= r && r < k.b);
            return inside ? 0.0 : ninf;
          } else if constexpr (std::is_same_v<T, Constant>) {
            return k.c > 0.0 ? std::log(k.c) : ninf;
          } else if constexpr (std::is_same_v<T, Tabulated>) {
            const double v = k.f->at(r, side);
            return v > 0.0 ? std::log(v) : ninf;
          } else {
            double acc = 0.0;
            for (const auto& w : k.factors) acc += w.log_value(r, side);
            return acc;
          }
        },
        kind_);
  }

  double operator()(double r, Side side = Side::left) const { return std::exp(log_value(r, side)); }

  /// Radii where the weight jumps.
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Indicator>) {
            if (k.a > 0.0) out.push_back(k.a);
            if (std::isfinite(k.b)) out.push_back(k.b);
          } else if constexpr (std::is_same_v<T, Tabulated>) {
            out = k.f->breakpoints();
          } else if constexpr (std::is_same_v<T, Product>) {
            for (const auto& w : k.factors) {
              auto b = w.breakpoints();
              out.insert(out.end(), b.begin(), b.end());
            }
          }
        },
        kind_);
    return out;
  }

  /// Exact power-law exponent near 0 / near infinity, when known.
  std::optional<double> tail_low() const { return tail(true); }
  std::optional<double> tail_high() const { return tail(false); }

  /// False if the weight can vanish (indicators, zero constants, tabulated zeros).
  bool strictly_positive() const {
    return std::visit(
        [](const auto& k) -> bool {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Indicator>) return false;
          else if constexpr (std::is_same_v<T, Constant>) return k.c > 0.0;
          else if constexpr (std::is_same_v<T, Tabulated>) return k.f->all_of([](double v) { return v > 0.0; });
          else if constexpr (std::is_same_v<T, Product>) {
            for (const auto& w : k.factors)
              if (!w.strictly_positive()) return false;
            return true;
          } else return true;
        },
        kind_);
  }

  /// w^e sampled on the grid (computed as exp(e ln w)); jumps at breakpoints
  /// lying on nodes are kept as breaks.
  RadialFunction sample(const RadialGrid& grid, double e = 1.0) const {
    auto bp = breakpoints();
    auto lo = tail_low(), hi = tail_high();
    if (lo) *lo *= e;
    if (hi) *hi *= e;
    return RadialFunction::sample(
        grid,
        [&](double r, Side s) {
          const double l = log_value(r, s);
          if (std::isinf(l) && l < 0.0) {
            if (e > 0.0) return 0.0;
            throw std::domain_error("WeightSpec::sample: negative power of a vanishing weight");
          }
          return std::exp(e * l);
        },
        bp, lo, hi);
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Power>) {
            os << "power(" << k.exponent;
            if (k.scale != 1.0) os << ", " << k.scale;
            os << ")";
          } else if constexpr (std::is_same_v<T, Exponential>) {
            os << "exp(" << k.rate << ")";
          } else if constexpr (std::is_same_v<T, Indicator>) {
            os << "indicator(" << k.a << ", ";
            if (std::isinf(k.b)) os << "inf"; else os << k.b;
            os << ")";
          } else if constexpr (std::is_same_v<T, Constant>) {
            os << "const(" << k.c << ")";
          } else if constexpr (std::is_same_v<T, Tabulated>) {
            os << "tabulated(" << k.f->size() << " nodes)";
          } else {
            os << "product(";
            for (std::size_t i = 0; i < k.factors.size(); ++i) os << (i ? ", " : "") << k.factors[i].describe();
            os << ")";
          }
        },
        kind_);
    return os.str();
  }

 private:
  explicit WeightSpec(Kind k) : kind_(std::move(k)) {}

  std::optional<double> tail(bool low) const {
    return std::visit(
        [&](const auto& k) -> std::optional<double> {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Power>) return k.exponent;
          else if constexpr (std::is_same_v<T, Exponential>) return std::nullopt;
          else if constexpr (std::is_same_v<T, Indicator> || std::is_same_v<T, Constant>) return 0.0;
          else if constexpr (std::is_same_v<T, Tabulated>) return low ? k.f->tail_low() : k.f->tail_high();
          else {
            double acc = 0.0;
            for (const auto& w : k.factors) {
              auto t = w.tail(low);
              if (!t) return std::nullopt;
              acc += *t;
            }
            return acc;
          }
        },
        kind_);
  }

  Kind kind_;
};

/// The weight r -> |B(0, r)| = |B(0,1)| r^n as a power weight.
inline WeightSpec ball_volume_weight(int n) { return WeightSpec::power(n, unit_ball_volume(n)); }

}  // namespace whardy
