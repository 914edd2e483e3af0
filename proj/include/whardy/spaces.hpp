#pragma once

// Weighted Lebesgue, variable-exponent Lebesgue and Musielak-Orlicz norms of
// radial functions. A divergent modular or norm is reported as +infinity.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "whardy/quadrature.hpp"
#include "whardy/weights.hpp"

namespace whardy {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A generalized phi-function phi(x, t): convex, non-decreasing and vanishing at
/// t = 0 in its second argument for every radius x.
class PhiFunction {
 public:
  struct Power {
    double q;
  };
  struct VariablePower {
    std::shared_ptr<const RadialFunction> q;
  };
  struct Custom {
    std::function<double(double, double)> phi;
    std::string name;
  };
  using Kind = std::variant<Power, VariablePower, Custom>;

  /// phi(x, t) = t^q
  static PhiFunction power(double q) {
    if (!(q >= 1.0) || !std::isfinite(q)) throw std::invalid_argument("power phi-function: exponent must be in [1, inf)");
    return PhiFunction(Power{q});
  }

  /// phi(x, t) = t^{q(x)}; q is continued as a constant beyond its grid.
  static PhiFunction variable_power(RadialFunction q) {
    if (!q.all_of([](double v) { return v >= 1.0; }))
      throw std::invalid_argument("variable exponent must satisfy q(x) >= 1");
    return PhiFunction(VariablePower{std::make_shared<const RadialFunction>(q.with_tails(0.0, 0.0))});
  }

  /// Arbitrary phi(x, t). The convexity, monotonicity and vanishing at zero are
  /// spot-checked on a sample of radii and a geometric t-grid.
  static PhiFunction custom(std::function<double(double, double)> phi, std::string name) {
    PhiFunction out(Custom{std::move(phi), std::move(name)});
    out.spot_check();
    return out;
  }

  const Kind& kind() const noexcept { return kind_; }

  double operator()(double x, double t) const {
    return std::visit(
        [&](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Power>) return std::pow(t, k.q);
          else if constexpr (std::is_same_v<T, VariablePower>) return std::pow(t, k.q->at(x));
          else return k.phi(x, t);
        },
        kind_);
  }

  /// [q_min, q_max] for the power families.
  std::optional<std::pair<double, double>> exponent_range() const {
    if (auto* p = std::get_if<Power>(&kind_)) return std::pair{p->q, p->q};
    if (auto* v = std::get_if<VariablePower>(&kind_)) {
      double lo = kInf, hi = -kInf;
      for (std::size_t k = 0; k < v->q->size(); ++k) {
        lo = std::min({lo, v->q->left(k), v->q->right(k)});
        hi = std::max({hi, v->q->left(k), v->q->right(k)});
      }
      return std::pair{lo, hi};
    }
    return std::nullopt;
  }

  std::vector<double> breakpoints() const {
    if (auto* v = std::get_if<VariablePower>(&kind_)) return v->q->breakpoints();
    return {};
  }

  /// r -> phi(r, s |f(r)|) on f's grid.
  RadialFunction compose(const RadialFunction& f, double s = 1.0) const {
    const double ls = std::log(s);
    return std::visit(
        [&](const auto& k) -> RadialFunction {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Power>) {
            RadialFunction::Tail lo, hi;
            if (f.tail_low()) lo = k.q * *f.tail_low();
            if (f.tail_high()) hi = k.q * *f.tail_high();
            return map(
                f, [&](double v) { return v == 0.0 ? 0.0 : std::exp(k.q * (std::log(std::abs(v)) + ls)); }, lo, hi);
          } else if constexpr (std::is_same_v<T, VariablePower>) {
            const RadialFunction q = resample(*k.q, f.grid());
            const std::size_t K = f.size();
            std::vector<double> l(K), r(K);
            std::vector<unsigned char> br(K);
            auto ev = [&](double v, double e) { return v == 0.0 ? 0.0 : std::exp(e * (std::log(std::abs(v)) + ls)); };
            for (std::size_t j = 0; j < K; ++j) {
              l[j] = ev(f.left(j), q.left(j));
              r[j] = ev(f.right(j), q.right(j));
              br[j] = f.is_break(j) || q.is_break(j);
            }
            RadialFunction::Tail lo, hi;
            if (f.tail_low()) lo = q.left(0) * *f.tail_low();
            if (f.tail_high()) hi = q.right(K - 1) * *f.tail_high();
            return RadialFunction(f.grid(), std::move(l), std::move(r), std::move(br), lo, hi);
          } else {
            return map(f, [&](double x, double v) { return k.phi(x, s * std::abs(v)); });
          }
        },
        kind_);
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Power>) os << "power(" << k.q << ")";
          else if constexpr (std::is_same_v<T, VariablePower>) os << "variable_power(" << k.q->size() << " nodes)";
          else os << k.name;
        },
        kind_);
    return os.str();
  }

 private:
  explicit PhiFunction(Kind k) : kind_(std::move(k)) {}

  void spot_check() const {
    const double xs[] = {1e-3, 1e-1, 1.0, 1e1, 1e3};
    std::vector<double> ts;
    for (int i = 0; i <= 80; ++i) ts.push_back(std::pow(10.0, -6.0 + 8.0 * i / 80.0));
    for (double x : xs) {
      const double z = (*this)(x, 0.0);
      if (z != 0.0) throw std::invalid_argument("phi-function must vanish at t = 0");
      if (!((*this)(x, 1e-8) <= 1e-6 * (*this)(x, 1.0)))
        throw std::invalid_argument("phi-function must tend to 0 as t -> 0+");
      double prev = 0.0;
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const double v = (*this)(x, ts[i]);
        if (!(v >= prev) || !std::isfinite(v)) throw std::invalid_argument("phi-function must be finite and non-decreasing");
        prev = v;
        if (i + 1 < ts.size()) {
          const double a = ts[i], b = ts[i + 1];
          const double mid = (*this)(x, 0.5 * (a + b));
          const double chord = 0.5 * ((*this)(x, a) + (*this)(x, b));
          if (mid > chord * (1.0 + 1e-12) + 1e-300) throw std::invalid_argument("phi-function failed the convexity spot-check");
        }
      }
    }
  }

  Kind kind_;
};

/// Target-space descriptor: a base space together with a weight w, normed by
/// ||f||_{X_w} = ||f w||_X.
struct SpaceSpec {
  struct Lebesgue {
    double p;
  };
  struct VariableLebesgue {
    PhiFunction phi;
  };
  struct MusielakOrlicz {
    PhiFunction phi;
  };
  using Family = std::variant<Lebesgue, VariableLebesgue, MusielakOrlicz>;

  Family family;
  WeightSpec weight = WeightSpec::one();

  static SpaceSpec lebesgue(double p, WeightSpec w = WeightSpec::one()) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("lebesgue space: exponent must be in [1, inf)");
    return SpaceSpec{Lebesgue{p}, std::move(w)};
  }
  static SpaceSpec variable_lebesgue(RadialFunction q, WeightSpec w = WeightSpec::one()) {
    return SpaceSpec{VariableLebesgue{PhiFunction::variable_power(std::move(q))}, std::move(w)};
  }
  static SpaceSpec musielak_orlicz(PhiFunction phi, WeightSpec w = WeightSpec::one()) {
    return SpaceSpec{MusielakOrlicz{std::move(phi)}, std::move(w)};
  }

  SpaceSpec with_weight(WeightSpec w) const { return SpaceSpec{family, std::move(w)}; }

  /// Radii where either the weight or the exponent jumps.
  std::vector<double> breakpoints() const {
    auto out = weight.breakpoints();
    if (auto* v = std::get_if<VariableLebesgue>(&family)) {
      auto b = v->phi.breakpoints();
      out.insert(out.end(), b.begin(), b.end());
    }
    if (auto* m = std::get_if<MusielakOrlicz>(&family)) {
      auto b = m->phi.breakpoints();
      out.insert(out.end(), b.begin(), b.end());
    }
    return out;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Lebesgue>) os << "lebesgue(" << k.p << ")";
          else if constexpr (std::is_same_v<T, VariableLebesgue>) os << "variable_lebesgue(" << k.phi.describe() << ")";
          else os << "musielak_orlicz(" << k.phi.describe() << ")";
        },
        family);
    os << " weight " << weight.describe();
    return os.str();
  }
};

// ---------------------------------------------------------------------------

/// rho_phi(f) = integral of phi(|y|, |f(y)|) over R^n; +inf when divergent.
inline double modular(const PhiFunction& phi, const RadialFunction& f, double scale = 1.0) {
  try {
    return integrate(phi.compose(f, scale), 0.0, kInf);
  } catch (const DivergenceError&) {
    return kInf;
  }
}

struct LuxemburgOptions {
  double rel_width = 1e-10;
  int max_bisections = 200;
  int max_doublings = 60;
};

/// inf{lambda > 0 : rho_phi(f / lambda) <= 1}. Returns the upper end of the
/// final bracket, so rho_phi(f / result) <= 1 always holds.
/// Throws DivergenceError when no finite bracket exists.
inline double luxemburg_norm(const PhiFunction& phi, const RadialFunction& f, const LuxemburgOptions& opt = {}) {
  const double m = f.max_abs();
  if (m == 0.0) return 0.0;
  // bracket around lambda = max|f| so that f / lambda is of unit size
  auto rho = [&](double lambda) { return modular(phi, f, 1.0 / lambda); };
  double lo, hi;
  if (rho(m) <= 1.0) {
    hi = m;
    lo = 0.5 * m;
    for (int i = 0; rho(lo) <= 1.0; ++i) {
      if (i > 2000) return hi;
      hi = lo;
      lo *= 0.5;
    }
  } else {
    lo = m;
    hi = 2.0 * m;
    for (int d = 1; !(rho(hi) <= 1.0); ++d) {
      if (d >= opt.max_doublings) throw DivergenceError("unbounded norm: no finite Luxemburg bracket after 60 doublings");
      lo = hi;
      hi *= 2.0;
    }
  }
  for (int i = 0; i < opt.max_bisections && (hi - lo) > opt.rel_width * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (rho(mid) <= 1.0) hi = mid;
    else lo = mid;
  }
  return hi;
}

namespace detail {

inline RadialFunction on_refined_grid(const RadialFunction& f, const std::vector<double>& breakpoints) {
  const RadialGrid g = f.grid().with_nodes(breakpoints);
  return resample(f, g);
}

}  // namespace detail

/// (integral of |f v|^p)^{1/p}; +inf when divergent.
inline double weighted_lebesgue_norm(const RadialFunction& f, double p, const WeightSpec& v = WeightSpec::one()) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("weighted_lebesgue_norm: p must be in [1, inf)");
  const RadialFunction fr = detail::on_refined_grid(f, v.breakpoints());
  if (fr.max_abs() == 0.0) return 0.0;
  try {
    const RadialFunction integrand = multiply(pow(fr, p), v.sample(fr.grid(), p));
    return std::pow(integrate(integrand, 0.0, kInf), 1.0 / p);
  } catch (const DivergenceError&) {
    return kInf;
  }
}

/// ||f||_{X_w} = ||f w||_X; +inf when divergent.
inline double space_norm(const RadialFunction& f, const SpaceSpec& spec) {
  const RadialFunction fr = detail::on_refined_grid(f, spec.breakpoints());
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, SpaceSpec::Lebesgue>) {
          return weighted_lebesgue_norm(fr, k.p, spec.weight);
        } else {
          try {
            return luxemburg_norm(k.phi, multiply(fr, spec.weight.sample(fr.grid())));
          } catch (const DivergenceError&) {
            return kInf;
          }
        }
      },
      spec.family);
}

// ---------------------------------------------------------------------------

struct Delta2Result {
  bool satisfied = false;
  double K_estimate = 0.0;
};

/// Largest ratio phi(x, 2t) / phi(x, t) over the samples (pairs with
/// phi(x, t) = 0 are skipped). The condition is declared satisfied when the
/// ratio stays below 1e6.
inline Delta2Result delta2_check(const PhiFunction& phi, std::span<const double> xs, std::span<const double> ts) {
  if (xs.empty() || ts.empty()) throw std::invalid_argument("delta2_check: sample sets must be non-empty");
  Delta2Result r;
  for (double x : xs)
    for (double t : ts) {
      const double a = phi(x, t);
      if (a == 0.0) continue;
      const double ratio = phi(x, 2.0 * t) / a;
      r.K_estimate = std::max(r.K_estimate, std::isnan(ratio) ? kInf : ratio);
    }
  r.satisfied = std::isfinite(r.K_estimate) && r.K_estimate <= 1e6;
  return r;
}

/// Whether phi(x, C t) <= C^{r(x)} phi(x, t) on every sampled triple.
inline bool power_condition_check(const PhiFunction& phi, const RadialFunction& r_exponent, std::span<const double> Cs,
                                  std::span<const double> xs, std::span<const double> ts) {
  for (double x : xs) {
    const double r = r_exponent.at(x);
    if (!(r > 1.0)) throw std::invalid_argument("power_condition_check: exponent must exceed 1");
    for (double C : Cs)
      for (double t : ts)
        if (phi(x, C * t) > std::pow(C, r) * phi(x, t) * (1.0 + 1e-12)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

/// Samples of f(x, y) on grid_x x grid_y, stored x-major.
struct TwoVariableSamples {
  RadialGrid grid_x;
  RadialGrid grid_y;
  std::vector<double> values;
  RadialFunction::Tail x_low = {}, x_high = {}, y_low = {}, y_high = {};

  double operator()(std::size_t i, std::size_t j) const { return values[i * grid_y.size() + j]; }

  RadialFunction slice_x(std::size_t i) const {
    std::vector<double> v(grid_y.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = (*this)(i, j);
    return RadialFunction(grid_y, std::move(v), y_low, y_high);
  }
  RadialFunction slice_y(std::size_t j) const {
    std::vector<double> v(grid_x.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (*this)(i, j);
    return RadialFunction(grid_x, std::move(v), x_low, x_high);
  }
};

struct MixedNorms {
  double outer_inner = 0.0;  ///< || ||f(x, .)||_{L_p} ||_X
  double inner_outer = 0.0;  ///< || ||f(., y)||_X ||_{L_p}
};

/// Both mixed norms of f with X = outer over the x variable and L_p over y.
inline MixedNorms mixed_norms(const TwoVariableSamples& f, const SpaceSpec& outer, double inner_p) {
  if (f.values.size() != f.grid_x.size() * f.grid_y.size())
    throw std::invalid_argument("mixed_norms: sample count must equal the tensor grid size");
  MixedNorms out;
  std::vector<double> a(f.grid_x.size()), b(f.grid_y.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = weighted_lebesgue_norm(f.slice_x(i), inner_p);
  for (std::size_t j = 0; j < b.size(); ++j) b[j] = space_norm(f.slice_y(j), outer);
  auto finite = [](const std::vector<double>& v) { return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); }); };
  out.outer_inner = finite(a) ? space_norm(RadialFunction(f.grid_x, a, f.x_low, f.x_high), outer) : kInf;
  out.inner_outer = finite(b) ? weighted_lebesgue_norm(RadialFunction(f.grid_y, b, f.y_low, f.y_high), inner_p) : kInf;
  return out;
}

/// C_{p,q} = (c1 + c2 + p (1/q_min - 1/q_max)) (c1 + c2), where c1, c2 are the
/// sup-norms (0 or 1) of the indicators of {q = p} and its complement.
inline double lemma1_constant(double p, const RadialFunction& q, bool delta1_nonempty, bool delta2_nonempty) {
  if (!delta1_nonempty && !delta2_nonempty)
    throw std::invalid_argument("lemma1_constant: the two sets cover the product domain, both cannot be empty");
  double q_lo = kInf, q_hi = -kInf;
  for (std::size_t k = 0; k < q.size(); ++k) {
    q_lo = std::min({q_lo, q.left(k), q.right(k)});
    q_hi = std::max({q_hi, q.left(k), q.right(k)});
  }
  if (!(p >= 1.0) || q_lo < p * (1.0 - 1e-12)) throw std::invalid_argument("lemma1_constant: require 1 <= p <= q(x)");
  const double c = (delta1_nonempty ? 1.0 : 0.0) + (delta2_nonempty ? 1.0 : 0.0);
  return (c + p * (1.0 / q_lo - 1.0 / q_hi)) * c;
}

/// Largest target modular rho_phi(w S f) over samples f of source norm <= 1.
inline double modular_boundedness_probe(const std::function<RadialFunction(const RadialFunction&)>& S, const PhiFunction& phi_target,
                                        std::span<const RadialFunction> samples, double p,
                                        const WeightSpec& v = WeightSpec::one(), const WeightSpec& w = WeightSpec::one()) {
  double worst = 0.0;
  for (const auto& f : samples) {
    if (weighted_lebesgue_norm(f, p, v) > 1.0 + 1e-12)
      throw std::invalid_argument("modular_boundedness_probe: sample has source norm above 1");
    std::optional<RadialFunction> image;
    try {
      image.emplace(S(f));
    } catch (const DivergenceError&) {
      return kInf;
    }
    const RadialFunction wi = detail::on_refined_grid(*image, w.breakpoints());
    worst = std::max(worst, modular(phi_target, multiply(wi, w.sample(wi.grid()))));
  }
  return worst;
}

}  // namespace whardy
