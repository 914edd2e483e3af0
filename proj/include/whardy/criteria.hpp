#pragma once

// Criterion functionals A(alpha), B(gamma), D(s) for the Hardy operator, its
// dual and the geometric mean operator, the two-sided bounds on the best
// constant, necessity test functions and numerical best-constant estimation.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "whardy/operators.hpp"
#include "whardy/search.hpp"
#include "whardy/spaces.hpp"
#include "whardy/weights.hpp"

namespace whardy {

struct CriterionOptions {
  int n = 1;
  GridParams grid{};
  int refine_iterations = 60;
  bool stability = true;
};

struct CriterionReport {
  std::string name;
  double param = 0.0;
  double value = 0.0;  ///< +inf when divergent
  bool finite = false;
  double argmax_t = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<double, double>> t_profile;
  double stability = std::numeric_limits<double>::quiet_NaN();  ///< value on the grid cut one decade at each end / value
  bool converged = false;                                        ///< finite and stability in [0.9, 1]
  std::string diagnostic;
};

struct BoundsReport {
  std::vector<double> params;
  std::vector<double> lower_each;  ///< per-parameter lower bound (NaN when unusable)
  std::vector<double> upper_each;  ///< per-parameter upper bound including M (NaN when unusable)
  double lower = 0.0;              ///< sup of lower_each
  double upper = std::numeric_limits<double>::infinity();  ///< inf of upper_each
  double M = 1.0;
};

namespace detail {

inline constexpr double kStabilityFloor = 0.9;

/// Setup on a grid, then the profile value at node k.
using ProfileAt = std::function<double(std::size_t)>;
using ProfilePreparer = std::function<ProfileAt(const RadialGrid&)>;

inline double dual_exponent(double p) { return p / (p - 1.0); }

inline void require_open_unit(double a, const char* who) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument(std::string(who) + ": parameter must lie in (0, 1)");
}

inline void require_p(double p, const char* who) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument(std::string(who) + ": p must lie in (1, inf)");
}

inline void require_positive_weight(const WeightSpec& v, const char* who) {
  if (!v.strictly_positive()) throw std::invalid_argument(std::string(who) + ": source weight must be strictly positive");
}

inline std::vector<double> merged_breakpoints(const WeightSpec& v, const SpaceSpec& target) {
  auto b = v.breakpoints();
  auto t = target.breakpoints();
  b.insert(b.end(), t.begin(), t.end());
  return b;
}

struct SupResult {
  double value = 0.0;
  double argmax_t = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<double, double>> profile;
  std::string diagnostic;
};

/// Coarse pass over the nodes of g, then golden-section refinement in ln t
/// around the best node. Refined points are evaluated on g with t inserted.
inline SupResult sup_over_t(const ProfilePreparer& prepare, const RadialGrid& g, const std::vector<double>& bps,
                            int iterations) {
  SupResult out;
  ProfileAt at;
  try {
    at = prepare(g);
  } catch (const DivergenceError& e) {
    out.value = kInf;
    out.diagnostic = e.what();
    return out;
  }
  std::size_t best = 0;
  double best_v = -1.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    double v;
    try {
      v = at(k);
    } catch (const DivergenceError& e) {
      v = kInf;
      if (out.diagnostic.empty()) out.diagnostic = e.what();
    }
    out.profile.emplace_back(g.node(k), v);
    if (std::isinf(v)) {
      out.value = kInf;
      out.argmax_t = g.node(k);
      if (out.diagnostic.empty()) out.diagnostic = "space norm diverges at t = " + std::to_string(g.node(k));
      return out;
    }
    if (v > best_v) {
      best_v = v;
      best = k;
    }
  }
  out.value = best_v;
  out.argmax_t = g.node(best);
  if (iterations <= 0 || best_v <= 0.0) return out;
  const double ua = g.log_node(best == 0 ? 0 : best - 1);
  const double ub = g.log_node(std::min(best + 1, g.size() - 1));
  auto at_t = [&](double u) -> double {
    const double t = std::exp(u);
    const RadialGrid gt = g.with_nodes({t}).with_nodes(bps);
    const auto k = gt.find_node(t);
    if (!k) return std::numeric_limits<double>::quiet_NaN();
    try {
      return prepare(gt)(*k);
    } catch (const std::exception&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  const auto r = golden_section_max(at_t, ua, ub, iterations, 1e-12);
  if (std::isfinite(r.value) && r.value > out.value) {
    out.value = r.value;
    out.argmax_t = std::exp(r.x);
  }
  return out;
}

inline CriterionReport run_criterion(std::string name, double param, const ProfilePreparer& prepare,
                                     const std::vector<double>& bps, const CriterionOptions& opt) {
  CriterionReport rep;
  rep.name = std::move(name);
  rep.param = param;
  const RadialGrid g = default_grid(opt.n, opt.grid).with_nodes(bps);
  auto full = sup_over_t(prepare, g, bps, opt.refine_iterations);
  rep.value = full.value;
  rep.argmax_t = full.argmax_t;
  rep.t_profile = std::move(full.profile);
  rep.diagnostic = std::move(full.diagnostic);
  rep.finite = std::isfinite(rep.value);
  if (!rep.finite) {
    rep.stability = 0.0;
    return rep;
  }
  if (opt.stability) {
    const RadialGrid gt = g.truncated(g.r_min() * 10.0, g.r_max() / 10.0);
    const auto cut = sup_over_t(prepare, gt, bps, opt.refine_iterations);
    if (rep.value == 0.0) rep.stability = cut.value == 0.0 ? 1.0 : 0.0;
    else rep.stability = std::isfinite(cut.value) ? cut.value / rep.value : 0.0;
    rep.converged = rep.stability >= kStabilityFloor && rep.stability <= 1.0 + 1e-6;
  } else {
    rep.converged = true;
  }
  return rep;
}

}  // namespace detail

/// A(alpha) = sup_t g(t)^{alpha/p'} || chi_{|z|>t} g(|z|)^{(1-alpha)/p'} ||_target,
/// g(t) = integral of v^{-p'} over |y| < t.
inline CriterionReport criterion_A(double alpha, double p, const WeightSpec& v, const SpaceSpec& target,
                                   const CriterionOptions& opt = {}) {
  detail::require_open_unit(alpha, "criterion_A");
  detail::require_p(p, "criterion_A");
  detail::require_positive_weight(v, "criterion_A");
  const double pp = detail::dual_exponent(p);
  detail::ProfilePreparer prep = [=](const RadialGrid& g) -> detail::ProfileAt {
    const auto gf = cumulative_ball_integrals(v.sample(g, -pp));
    const auto h = pow(gf, (1.0 - alpha) / pp);
    return [=](std::size_t k) { return std::pow(gf.value(k), alpha / pp) * space_norm(cut_below(h, k), target); };
  };
  return detail::run_criterion("A", alpha, prep, detail::merged_breakpoints(v, target), opt);
}

/// B(gamma): the mirror of A with the tail integral of v^{-p'} and chi_{|z|<t}.
inline CriterionReport criterion_B(double gamma, double p, const WeightSpec& v, const SpaceSpec& target,
                                   const CriterionOptions& opt = {}) {
  detail::require_open_unit(gamma, "criterion_B");
  detail::require_p(p, "criterion_B");
  detail::require_positive_weight(v, "criterion_B");
  const double pp = detail::dual_exponent(p);
  detail::ProfilePreparer prep = [=](const RadialGrid& g) -> detail::ProfileAt {
    const auto gf = cumulative_tail_integrals(v.sample(g, -pp));
    const auto h = pow(gf, (1.0 - gamma) / pp);
    return [=](std::size_t k) { return std::pow(gf.value(k), gamma / pp) * space_norm(cut_above(h, k), target); };
  };
  return detail::run_criterion("B", gamma, prep, detail::merged_breakpoints(v, target), opt);
}

/// |B(0,|x|)|^{-s/p} exp(mean of ln(1/v) over B(0,|x|)) on g.
inline RadialFunction criterion_D_kernel(double s, double p, const WeightSpec& v, const RadialGrid& g) {
  const int n = g.dimension();
  const auto gm = geometric_mean(v.sample(g, -1.0));
  const double e = -s / p;
  const double vb = unit_ball_volume(n);
  const auto vol = RadialFunction::sample(g, [&](double r) { return std::pow(vb, e) * std::pow(r, n * e); }, {}, n * e, n * e);
  return multiply(gm, vol);
}

/// D(s) = sup_t |B(0,t)|^{(s-1)/p} || chi_{|z|>t} |B(0,|z|)|^{-s/p} exp(mean ln(1/v)) ||_target.
inline CriterionReport criterion_D(double s, double p, const WeightSpec& v, const SpaceSpec& target,
                                   const CriterionOptions& opt = {}) {
  if (!(p > 1.0) || !(s > 1.0 && s < p)) throw std::invalid_argument("criterion_D: s must lie in (1, p)");
  detail::require_positive_weight(v, "criterion_D");
  detail::ProfilePreparer prep = [=](const RadialGrid& g) -> detail::ProfileAt {
    const auto h = criterion_D_kernel(s, p, v, g);
    return [=](std::size_t k) {
      return std::pow(ball_volume(g.dimension(), g.node(k)), (s - 1.0) / p) * space_norm(cut_below(h, k), target);
    };
  };
  return detail::run_criterion("D", s, prep, detail::merged_breakpoints(v, target), opt);
}

/// criterion_A with the target weight multiplied by |x|^{-n}.
inline CriterionReport condition_48(double alpha, double p, const WeightSpec& v, const SpaceSpec& target,
                                    const CriterionOptions& opt = {}) {
  auto rep = criterion_A(alpha, p, v, target.with_weight(WeightSpec::product({target.weight, WeightSpec::power(-opt.n)})), opt);
  rep.name = "condition_48";
  return rep;
}

/// criterion_B with the source weight multiplied by |y|^n.
inline CriterionReport condition_49(double gamma, double p, const WeightSpec& v, const SpaceSpec& target,
                                    const CriterionOptions& opt = {}) {
  auto rep = criterion_B(gamma, p, WeightSpec::product({v, WeightSpec::power(opt.n)}), target, opt);
  rep.name = "condition_49";
  return rep;
}

struct Condition410Result {
  bool holds = false;
  double M_estimate = 0.0;
  std::vector<std::pair<double, double>> per_probe;  ///< (|x|, ratio)
};

inline std::vector<double> default_probe_radii() {
  std::vector<double> r(25);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::pow(10.0, -6.0 + 12.0 * static_cast<double>(i) / 24.0);
  return r;
}

/// max over probes |x| of sup w / inf v on |x|/2 < r <= 4|x|, each sampled at
/// 64 log-spaced radii. Holds when finite and the outermost probes do not
/// exceed the interior maximum (2 probes at each end are treated as outer).
inline Condition410Result condition_410(const WeightSpec& v, const WeightSpec& w, const std::vector<double>& probes = default_probe_radii()) {
  Condition410Result out;
  double interior = 0.0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double x = probes[i];
    if (!(x > 0.0)) throw std::invalid_argument("condition_410: probe radii must be positive");
    double sup_w = 0.0, inf_v = kInf;
    for (int j = 0; j < 64; ++j) {
      const double r = 0.5 * x * std::pow(8.0, j / 63.0);
      sup_w = std::max(sup_w, w(r));
      inf_v = std::min(inf_v, v(r));
    }
    const double ratio = inf_v > 0.0 ? sup_w / inf_v : kInf;
    out.per_probe.emplace_back(x, ratio);
    out.M_estimate = std::max(out.M_estimate, ratio);
    if (i >= 2 && i + 2 < probes.size()) interior = std::max(interior, ratio);
  }
  out.holds = std::isfinite(out.M_estimate) && (probes.size() < 5 || out.M_estimate <= interior * (1.0 + 1e-6));
  return out;
}

inline double lower_bound_thm2(double alpha, double p, double A_value) {
  const double pp = detail::dual_exponent(p);
  return pp * A_value / ((1.0 - alpha) * std::pow(std::pow(pp / (1.0 - alpha), p) + 1.0 / (alpha * (p - 1.0)), 1.0 / p));
}

inline double upper_bound_thm2(double alpha, double p, double M, double A_value) {
  return M * A_value / std::pow(1.0 - alpha, 1.0 / detail::dual_exponent(p));
}

/// Two-sided bounds from per-parameter criterion values. Lower bounds use every
/// finite value; upper bounds only use values declared converged.
inline BoundsReport bounds_thm2(const std::vector<CriterionReport>& reps, double p, double M) {
  BoundsReport b;
  b.M = M;
  b.lower = 0.0;
  for (const auto& r : reps) {
    b.params.push_back(r.param);
    const double lo = r.finite ? lower_bound_thm2(r.param, p, r.value) : std::numeric_limits<double>::quiet_NaN();
    const double up = r.finite && r.converged ? upper_bound_thm2(r.param, p, M, r.value) : std::numeric_limits<double>::quiet_NaN();
    b.lower_each.push_back(lo);
    b.upper_each.push_back(up);
    if (std::isfinite(lo)) b.lower = std::max(b.lower, lo);
    if (std::isfinite(up)) b.upper = std::min(b.upper, up);
  }
  return b;
}

/// lower = max e^{s/p} (e^s + 1/(s-1))^{-1/p} D(s), upper = 2^{1/p} min e^{(s-1)/p} D(s),
/// over the finite entries. No finite entry gives lower = upper = inf.
inline BoundsReport bounds_thm4(const std::vector<double>& s_grid, double p, const std::vector<double>& D_values,
                                const std::vector<bool>& converged = {}) {
  if (s_grid.size() != D_values.size()) throw std::invalid_argument("bounds_thm4: grid and values differ in length");
  BoundsReport b;
  b.M = std::pow(2.0, 1.0 / p);
  b.params = s_grid;
  bool any = false;
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const double s = s_grid[i], D = D_values[i];
    if (!(s > 1.0)) throw std::invalid_argument("bounds_thm4: s must exceed 1");
    if (!std::isfinite(D)) {
      b.lower_each.push_back(std::numeric_limits<double>::quiet_NaN());
      b.upper_each.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    any = true;
    const double lo = std::exp(s / p) * std::pow(std::exp(s) + 1.0 / (s - 1.0), -1.0 / p) * D;
    const bool use_up = converged.empty() || converged[i];
    const double up = use_up ? b.M * std::exp((s - 1.0) / p) * D : std::numeric_limits<double>::quiet_NaN();
    b.lower_each.push_back(lo);
    b.upper_each.push_back(up);
    b.lower = std::max(b.lower, lo);
    if (std::isfinite(up)) b.upper = std::min(b.upper, up);
  }
  if (!any) b.lower = b.upper = kInf;
  return b;
}

/// The necessity test function for criterion A on grid g (t is inserted as a node).
inline RadialFunction extremal_function_thm2(double t, double alpha, double p, const WeightSpec& v, const RadialGrid& grid) {
  detail::require_open_unit(alpha, "extremal_function_thm2");
  detail::require_p(p, "extremal_function_thm2");
  if (!(t > 0.0)) throw std::invalid_argument("extremal_function_thm2: t must be positive");
  const double pp = detail::dual_exponent(p);
  auto bps = v.breakpoints();
  const RadialGrid g = grid.with_nodes(bps).with_nodes({t});
  const auto k = g.find_node(t);
  if (!k) throw std::logic_error("extremal_function_thm2: t was not inserted");
  const auto vneg = v.sample(g, -pp);
  const auto gf = cumulative_ball_integrals(vneg);
  const double e = -alpha / pp - 1.0 / p;
  const double gt = gf.value(*k);
  if (!(gt > 0.0) || !std::isfinite(gt)) throw DivergenceError("extremal_function_thm2: g(t) must be finite and positive");
  const double inner = pp / (1.0 - alpha) * std::pow(gt, e);
  const std::size_t K = g.size();
  std::vector<double> l(K), r(K);
  std::vector<unsigned char> br(vneg.breaks().begin(), vneg.breaks().end());
  for (std::size_t j = 0; j < K; ++j) {
    const double outer = std::pow(gf.value(j), e);
    l[j] = (j <= *k ? inner : outer) * vneg.left(j);
    r[j] = (j < *k ? inner : outer) * vneg.right(j);
  }
  br[*k] = 1;
  RadialFunction::Tail hi;
  return RadialFunction(g, std::move(l), std::move(r), std::move(br), vneg.tail_low(), hi);
}

// ---------------------------------------------------------------------------
// best-constant estimation

enum class FamilyKind { truncated_power, broken_power, exponential, extremal };

inline const char* family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::truncated_power: return "truncated_power";
    case FamilyKind::broken_power: return "broken_power";
    case FamilyKind::exponential: return "exponential";
    case FamilyKind::extremal: return "extremal";
  }
  return "?";
}

/// truncated_power: (a, lo, hi) gives |y|^a on lo < |y| < hi (lo may be 0, hi may be inf)
/// broken_power: (a_in, a_out, r0) gives |y|^a_in inside r0 and r0^a_in (|y|/r0)^a_out outside
/// exponential: (rate) gives exp(-rate |y|)
/// extremal: (t, alpha) gives extremal_function_thm2
struct FamilyMember {
  FamilyKind kind = FamilyKind::truncated_power;
  std::vector<double> params;
};

struct Family {
  std::vector<FamilyMember> members;
  int refine_iterations = 40;
};

struct EstimateOptions {
  int n = 1;
  GridParams grid{};
  int jobs = 1;
};

struct MemberResult {
  FamilyMember initial;
  FamilyMember refined;
  double ratio = std::numeric_limits<double>::quiet_NaN();  ///< NaN when the member is not admissible
};

struct EstimateReport {
  double C_est = 0.0;
  FamilyMember best_member;
  std::vector<MemberResult> members;
};

inline std::size_t family_param_count(FamilyKind k) {
  switch (k) {
    case FamilyKind::truncated_power: return 3;
    case FamilyKind::broken_power: return 3;
    case FamilyKind::exponential: return 1;
    case FamilyKind::extremal: return 2;
  }
  return 0;
}

inline RadialFunction build_member(const FamilyMember& m, double p, const WeightSpec& v, const RadialGrid& base) {
  if (m.params.size() != family_param_count(m.kind))
    throw std::invalid_argument(std::string("family member ") + family_kind_name(m.kind) + ": wrong parameter count");
  const auto& q = m.params;
  switch (m.kind) {
    case FamilyKind::truncated_power: {
      const double a = q[0], lo = q[1], hi = q[2];
      if (!(lo >= 0.0) || !(hi > lo)) throw std::invalid_argument("truncated_power: require 0 <= lo < hi");
      const RadialGrid g = base.with_nodes({lo, hi});
      const double bp[] = {lo, hi};
      return RadialFunction::sample(
          g,
          [&](double r, Side s) {
            const bool in = s == Side::left ? (lo < r && r <= hi) : (lo <= r && r < hi);
            return in ? std::pow(r, a) : 0.0;
          },
          bp, lo == 0.0 ? a : 0.0, std::isinf(hi) ? a : 0.0);
    }
    case FamilyKind::broken_power: {
      const double ai = q[0], ao = q[1], r0 = q[2];
      if (!(r0 > 0.0)) throw std::invalid_argument("broken_power: r0 must be positive");
      const RadialGrid g = base.with_nodes({r0});
      const double bp[] = {r0};
      return RadialFunction::sample(
          g, [&](double r) { return r <= r0 ? std::pow(r, ai) : std::pow(r0, ai) * std::pow(r / r0, ao); }, bp, ai, ao);
    }
    case FamilyKind::exponential: {
      const double rate = q[0];
      if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
      return RadialFunction::sample(base, [&](double r) { return std::exp(-rate * r); }, {}, 0.0);
    }
    case FamilyKind::extremal:
      return extremal_function_thm2(q[0], q[1], p, v, base);
  }
  throw std::logic_error("unknown family kind");
}

/// ||op f||_target / ||f||_{L_p,v}; NaN when f is not admissible (zero or
/// infinite source norm, or outside the operator's domain); +inf when the
/// image norm diverges.
inline double member_ratio(const Operator& op, const FamilyMember& m, double p, const WeightSpec& v, const SpaceSpec& target,
                           const EstimateOptions& opt) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    const RadialFunction f = build_member(m, p, v, default_grid(opt.n, opt.grid));
    const double src = weighted_lebesgue_norm(f, p, v);
    if (!(src > 0.0) || !std::isfinite(src)) return nan;
    double img;
    try {
      img = space_norm(op(f), target);
    } catch (const DivergenceError&) {
      img = kInf;
    }
    return img / src;
  } catch (const DivergenceError&) {
    return nan;
  } catch (const std::domain_error&) {
    return nan;
  } catch (const std::invalid_argument&) {
    return nan;
  }
}

namespace detail {

/// Search bracket for coordinate i of a member: (lo, hi, in log space?).
struct ParamBracket {
  double lo, hi;
  bool log_scale;
  bool fixed;
};

inline ParamBracket param_bracket(const FamilyMember& m, std::size_t i) {
  const double x = m.params[i];
  auto lin = [&](double w) { return ParamBracket{x - w, x + w, false, false}; };
  auto logb = [&](double f) {
    if (!(x > 0.0) || !std::isfinite(x)) return ParamBracket{x, x, false, true};
    return ParamBracket{std::log(x / f), std::log(x * f), true, false};
  };
  switch (m.kind) {
    case FamilyKind::truncated_power: return i == 0 ? lin(1.0) : logb(100.0);
    case FamilyKind::broken_power: return i < 2 ? lin(1.0) : logb(100.0);
    case FamilyKind::exponential: return logb(100.0);
    case FamilyKind::extremal:
      if (i == 0) return logb(100.0);
      return ParamBracket{std::max(1e-3, x - 0.5), std::min(1.0 - 1e-3, x + 0.5), false, false};
  }
  return {x, x, false, true};
}

}  // namespace detail

/// One coordinate-wise golden-section sweep over the member's parameters.
inline MemberResult refine_member(const Operator& op, const FamilyMember& m, double p, const WeightSpec& v, const SpaceSpec& target,
                                  const EstimateOptions& opt, int iterations) {
  MemberResult out;
  out.initial = m;
  out.refined = m;
  out.ratio = member_ratio(op, m, p, v, target, opt);
  if (iterations <= 0) return out;
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    const auto br = detail::param_bracket(out.refined, i);
    if (br.fixed) continue;
    auto trial = out.refined;
    auto f = [&](double y) {
      trial.params[i] = br.log_scale ? std::exp(y) : y;
      return member_ratio(op, trial, p, v, target, opt);
    };
    const auto r = golden_section_max(f, br.lo, br.hi, iterations);
    if (std::isnan(out.ratio) || r.value > out.ratio) {
      if (std::isnan(r.value) || r.value == -kInf) continue;
      out.ratio = r.value;
      out.refined.params[i] = br.log_scale ? std::exp(r.x) : r.x;
    }
  }
  return out;
}

/// C_est = max over refined members of the norm ratio. Every member is
/// refined independently, so adding members never lowers C_est.
inline EstimateReport estimate_operator_norm(const Operator& op, double p, const WeightSpec& v, const SpaceSpec& target,
                                             const Family& family, const EstimateOptions& opt = {}) {
  if (family.members.empty()) throw std::invalid_argument("estimate_operator_norm: empty family");
  EstimateReport rep;
  rep.members = parallel_map<MemberResult>(family.members.size(), opt.jobs, [&](std::size_t i) {
    return refine_member(op, family.members[i], p, v, target, opt, family.refine_iterations);
  });
  bool any = false;
  for (const auto& m : rep.members) {
    if (std::isnan(m.ratio)) continue;
    if (!any || m.ratio > rep.C_est) {
      rep.C_est = m.ratio;
      rep.best_member = m.refined;
      any = true;
    }
  }
  if (!any) throw std::runtime_error("estimate_operator_norm: no admissible family member");
  return rep;
}

/// Starting members placed around the critical power -n/p. The geometric mean
/// needs positive functions, so it gets no truncated members; the extremal
/// member belongs to the Hardy operator only.
inline Family default_family(const std::string& op_name, int n, double p) {
  const double c = -n / p;
  Family f;
  if (op_name == "geometric_mean") {
    f.members = {{FamilyKind::broken_power, {c + 0.2, c - 0.2, 1.0}}, {FamilyKind::exponential, {1.0}}};
    return f;
  }
  f.members = {{FamilyKind::truncated_power, {c + 0.1 * n, 0.0, 1.0}},
               {FamilyKind::truncated_power, {0.0, 0.0, 1.0}},
               {FamilyKind::broken_power, {c + 0.1 * n, c - 0.1 * n, 1.0}},
               {FamilyKind::exponential, {1.0}}};
  if (op_name == "hardy" && p > 1.0) f.members.push_back({FamilyKind::extremal, {1.0, 0.5}});
  return f;
}

/// The p-convexity constant used in the upper bounds.
inline double minkowski_constant(const SpaceSpec& target, double p) {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, SpaceSpec::Lebesgue>) {
          return k.p >= p ? 1.0 : kInf;
        } else if constexpr (std::is_same_v<T, SpaceSpec::VariableLebesgue>) {
          const auto range = k.phi.exponent_range();
          if (!range || range->first < p * (1.0 - 1e-12)) return kInf;
          const auto& q = *std::get<PhiFunction::VariablePower>(k.phi.kind()).q;
          bool d1 = false, d2 = false;
          for (std::size_t j = 0; j < q.size(); ++j)
            for (double x : {q.left(j), q.right(j)}) (std::abs(x - p) <= 1e-12 * p ? d1 : d2) = true;
          return lemma1_constant(p, q, d1, d2);
        } else {
          return std::pow(2.0, 1.0 / p);
        }
      },
      target.family);
}

enum class CriterionKind { A, B, D };

inline const char* criterion_kind_name(CriterionKind k) { return k == CriterionKind::A ? "A" : k == CriterionKind::B ? "B" : "D"; }

/// The criterion matching an operator: hardy -> A, dual_hardy -> B, geometric_mean -> D.
inline std::optional<CriterionKind> criterion_for(const std::string& op_name) {
  if (op_name == "hardy") return CriterionKind::A;
  if (op_name == "dual_hardy") return CriterionKind::B;
  if (op_name == "geometric_mean") return CriterionKind::D;
  return std::nullopt;
}

inline CriterionReport evaluate_criterion(CriterionKind kind, double param, double p, const WeightSpec& v, const SpaceSpec& target,
                                          const CriterionOptions& opt) {
  switch (kind) {
    case CriterionKind::A: return criterion_A(param, p, v, target, opt);
    case CriterionKind::B: return criterion_B(param, p, v, target, opt);
    case CriterionKind::D: return criterion_D(param, p, v, target, opt);
  }
  throw std::logic_error("unknown criterion");
}

/// Criterion values over a parameter grid, evaluated in parallel and returned
/// in parameter order.
inline std::vector<CriterionReport> criterion_sweep(CriterionKind kind, const std::vector<double>& params, double p, const WeightSpec& v,
                                                    const SpaceSpec& target, const CriterionOptions& opt, int jobs) {
  return parallel_map<CriterionReport>(params.size(), jobs,
                                       [&](std::size_t i) { return evaluate_criterion(kind, params[i], p, v, target, opt); });
}

inline BoundsReport bounds_for(CriterionKind kind, const std::vector<CriterionReport>& reps, double p, double M) {
  if (kind == CriterionKind::D) {
    std::vector<double> s, d;
    std::vector<bool> conv;
    for (const auto& r : reps) {
      s.push_back(r.param);
      d.push_back(r.finite ? r.value : kInf);
      conv.push_back(r.converged);
    }
    return bounds_thm4(s, p, d, conv);
  }
  return bounds_thm2(reps, p, M);
}

struct SandwichReport {
  CriterionKind kind = CriterionKind::A;
  std::vector<CriterionReport> criteria;
  BoundsReport bounds;
  EstimateReport estimate;
  bool unbounded = false;  ///< every criterion value diverged
  bool lower_ok = true;
  bool upper_ok = true;
  bool pass = true;
  std::string verdict;
};

inline SandwichReport sandwich_report(const Operator& op, double p, const WeightSpec& v, const SpaceSpec& target,
                                      const std::vector<double>& params, const Family& family, const CriterionOptions& copt,
                                      const EstimateOptions& eopt, double tol = 5e-2) {
  const auto kind = criterion_for(op.name);
  if (!kind) throw std::invalid_argument("sandwich_report: operator '" + op.name + "' has no criterion");
  SandwichReport rep;
  rep.kind = *kind;
  rep.criteria = criterion_sweep(*kind, params, p, v, target, copt, eopt.jobs);
  rep.bounds = bounds_for(*kind, rep.criteria, p, minkowski_constant(target, p));
  rep.estimate = estimate_operator_norm(op, p, v, target, family, eopt);
  rep.unbounded = std::none_of(rep.criteria.begin(), rep.criteria.end(), [](const CriterionReport& r) { return r.finite; });
  if (rep.unbounded) {
    rep.verdict = "unbounded";
    return rep;
  }
  rep.lower_ok = rep.bounds.lower <= rep.estimate.C_est * (1.0 + tol);
  rep.upper_ok = rep.estimate.C_est <= rep.bounds.upper * (1.0 + tol);
  rep.pass = rep.lower_ok && rep.upper_ok;
  rep.verdict = rep.pass ? "pass" : "violation";
  return rep;
}

}  // namespace whardy
