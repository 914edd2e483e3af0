#pragma once

// Run configuration for the command-line driver: JSON input, small weight and
// exponent expressions, and JSON / CSV report output.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "whardy/criteria.hpp"

namespace whardy {

using json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// name(arg, ...) with numeric or nested arguments.
struct Expr {
  std::string name;
  std::vector<Expr> args;
  std::optional<double> number;
};

class ExprParser {
 public:
  explicit ExprParser(std::string text) : s_(std::move(text)) {}

  Expr parse() {
    Expr e = term();
    skip();
    if (i_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + s_ + "': " + what + " at offset " + std::to_string(i_));
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  Expr term() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    const char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') return number();
    std::size_t start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (start == i_) fail("expected a name or a number");
    Expr e;
    e.name = s_.substr(start, i_ - start);
    if (e.name == "inf") {
      e.number = std::numeric_limits<double>::infinity();
      return e;
    }
    skip();
    if (i_ < s_.size() && s_[i_] == '(') {
      ++i_;
      skip();
      if (i_ < s_.size() && s_[i_] == ')') {
        ++i_;
        return e;
      }
      for (;;) {
        e.args.push_back(term());
        skip();
        if (i_ < s_.size() && s_[i_] == ',') {
          ++i_;
          continue;
        }
        if (i_ < s_.size() && s_[i_] == ')') {
          ++i_;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    return e;
  }
  Expr number() {
    const char* begin = s_.c_str() + i_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    i_ += static_cast<std::size_t>(end - begin);
    Expr e;
    e.number = v;
    return e;
  }

  std::string s_;
  std::size_t i_ = 0;
};

inline double num_arg(const Expr& e, std::size_t k, const std::string& ctx) {
  if (k >= e.args.size() || !e.args[k].number) throw ConfigError(ctx + ": argument " + std::to_string(k + 1) + " must be a number");
  return *e.args[k].number;
}

inline void arity(const Expr& e, std::size_t lo, std::size_t hi) {
  if (e.args.size() < lo || e.args.size() > hi)
    throw ConfigError(e.name + "(...): expected " + std::to_string(lo) + (lo == hi ? "" : "-" + std::to_string(hi)) + " arguments");
}

inline WeightSpec weight_from(const Expr& e) {
  if (e.number) return WeightSpec::constant(*e.number);
  if (e.name == "power") {
    arity(e, 1, 2);
    return WeightSpec::power(num_arg(e, 0, "power"), e.args.size() > 1 ? num_arg(e, 1, "power") : 1.0);
  }
  if (e.name == "exp") {
    arity(e, 1, 1);
    return WeightSpec::exponential(num_arg(e, 0, "exp"));
  }
  if (e.name == "indicator") {
    arity(e, 1, 2);
    return WeightSpec::indicator(num_arg(e, 0, "indicator"),
                                 e.args.size() > 1 ? num_arg(e, 1, "indicator") : std::numeric_limits<double>::infinity());
  }
  if (e.name == "const") {
    arity(e, 1, 1);
    return WeightSpec::constant(num_arg(e, 0, "const"));
  }
  if (e.name == "one") return WeightSpec::one();
  if (e.name == "zero") return WeightSpec::constant(0.0);
  if (e.name == "product") {
    std::vector<WeightSpec> f;
    for (const auto& a : e.args) f.push_back(weight_from(a));
    return WeightSpec::product(std::move(f));
  }
  throw ConfigError("unknown weight '" + e.name + "' (use power, exp, indicator, const, product)");
}

}  // namespace detail

/// Weight expressions: power(e[, scale]), exp(rate), indicator(a[, b]),
/// const(c), one, zero, product(w1, w2, ...). A bare number is a constant.
inline WeightSpec parse_weight(const std::string& text) {
  try {
    return detail::weight_from(detail::ExprParser(text).parse());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("weight '" + text + "': " + e.what());
  }
}

/// Variable exponents: const(q), step(q_in, r0, q_out), ramp(q0, q1) with
/// q0 + (q1 - q0) r / (1 + r). Sampled on the run grid.
inline RadialFunction parse_exponent(const std::string& text, int n, const GridParams& gp) {
  const auto e = detail::ExprParser(text).parse();
  if (e.number) return RadialFunction::constant(default_grid(n, gp), *e.number);
  if (e.name == "const") {
    detail::arity(e, 1, 1);
    return RadialFunction::constant(default_grid(n, gp), detail::num_arg(e, 0, "const"));
  }
  if (e.name == "step") {
    detail::arity(e, 3, 3);
    const double qi = detail::num_arg(e, 0, "step"), r0 = detail::num_arg(e, 1, "step"), qo = detail::num_arg(e, 2, "step");
    if (!(r0 > 0.0)) throw ConfigError("step exponent: radius must be positive");
    const double bp[] = {r0};
    return RadialFunction::sample(
        default_grid(n, gp).with_nodes({r0}), [&](double r, Side s) { return (s == Side::left ? r <= r0 : r < r0) ? qi : qo; }, bp);
  }
  if (e.name == "ramp") {
    detail::arity(e, 2, 2);
    const double q0 = detail::num_arg(e, 0, "ramp"), q1 = detail::num_arg(e, 1, "ramp");
    return RadialFunction::sample(default_grid(n, gp), [&](double r) { return q0 + (q1 - q0) * r / (1.0 + r); });
  }
  throw ConfigError("unknown exponent '" + e.name + "' (use const, step, ramp)");
}

/// {"space": "lebesgue", "p": 2, "weight": "..."},
/// {"space": "variable_lebesgue", "q": "step(2, 1, 4)", "weight": "..."},
/// {"space": "musielak_orlicz", "phi": "power(2)" or "variable(step(2, 1, 4))", "weight": "..."}.
inline SpaceSpec parse_space(const json& j, int n, const GridParams& gp) {
  if (!j.is_object()) throw ConfigError("space must be an object");
  const std::string kind = j.value("space", "lebesgue");
  const WeightSpec w = parse_weight(j.value("weight", "one"));
  try {
    if (kind == "lebesgue") {
      if (!j.contains("p")) throw ConfigError("lebesgue space needs \"p\"");
      return SpaceSpec::lebesgue(j.at("p").get<double>(), w);
    }
    if (kind == "variable_lebesgue") {
      if (!j.contains("q")) throw ConfigError("variable_lebesgue space needs \"q\"");
      return SpaceSpec::variable_lebesgue(parse_exponent(j.at("q").get<std::string>(), n, gp), w);
    }
    if (kind == "musielak_orlicz") {
      const auto e = detail::ExprParser(j.value("phi", "power(2)")).parse();
      if (e.name == "power") {
        detail::arity(e, 1, 1);
        return SpaceSpec::musielak_orlicz(PhiFunction::power(detail::num_arg(e, 0, "power")), w);
      }
      if (e.name == "variable") {
        const std::string phi = j.at("phi").get<std::string>();
        const auto open = phi.find('('), close = phi.rfind(')');
        return SpaceSpec::musielak_orlicz(PhiFunction::variable_power(parse_exponent(phi.substr(open + 1, close - open - 1), n, gp)), w);
      }
      throw ConfigError("unknown phi '" + e.name + "' (use power(q) or variable(exponent))");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("space: ") + e.what());
  }
  throw ConfigError("unknown space '" + kind + "' (use lebesgue, variable_lebesgue, musielak_orlicz)");
}

inline Operator parse_operator(const std::string& text) {
  const auto e = detail::ExprParser(text).parse();
  if (e.name == "hardy" && e.args.empty()) return hardy_operator();
  if (e.name == "dual_hardy" && e.args.empty()) return dual_hardy_operator();
  if (e.name == "geometric_mean" && e.args.empty()) return geometric_mean_operator();
  if (e.name == "power_mean") {
    detail::arity(e, 1, 1);
    const double beta = detail::num_arg(e, 0, "power_mean");
    if (!(beta > 0.0)) throw ConfigError("power_mean: beta must be positive");
    return power_mean(beta);
  }
  throw ConfigError("unknown operator '" + text + "' (use hardy, dual_hardy, geometric_mean, power_mean(beta))");
}

inline FamilyKind parse_family_kind(const std::string& s) {
  for (auto k : {FamilyKind::truncated_power, FamilyKind::broken_power, FamilyKind::exponential, FamilyKind::extremal})
    if (s == family_kind_name(k)) return k;
  throw ConfigError("unknown family kind '" + s + "'");
}

struct RunConfig {
  int n = 1;
  GridParams grid{};
  std::string operator_text = "hardy";
  double p = 2.0;
  std::string source_weight = "one";
  json target_json;
  json function_space_json;
  std::string function_text;
  std::vector<double> params;
  std::optional<Family> family;
  double sandwich_tol = 5e-2;
  int refine_iterations = 60;
  int family_iterations = 40;
  int jobs = 1;

  Operator op() const { return parse_operator(operator_text); }
  WeightSpec v() const { return parse_weight(source_weight); }
  SpaceSpec target() const { return parse_space(target_json, n, grid); }
  SpaceSpec function_space() const { return parse_space(function_space_json.is_null() ? target_json : function_space_json, n, grid); }

  CriterionOptions criterion_options() const {
    CriterionOptions o;
    o.n = n;
    o.grid = grid;
    o.refine_iterations = refine_iterations;
    return o;
  }
  EstimateOptions estimate_options() const {
    EstimateOptions o;
    o.n = n;
    o.grid = grid;
    o.jobs = jobs;
    return o;
  }
  Family resolved_family() const {
    Family f = family ? *family : default_family(op().name, n, p);
    f.refine_iterations = family_iterations;
    return f;
  }
};

/// Checks that parameters lie in the open interval of their criterion:
/// (0, 1) for A and B, (1, p) for D.
inline void validate_params(const RunConfig& c) {
  const auto kind = criterion_for(c.op().name);
  if (!kind) return;
  for (double x : c.params) {
    if (*kind == CriterionKind::D) {
      if (!(x > 1.0 && x < c.p)) throw ConfigError("parameter s = " + std::to_string(x) + " is outside (1, p)");
    } else if (!(x > 0.0 && x < 1.0)) {
      throw ConfigError("parameter " + std::to_string(x) + " is outside (0, 1)");
    }
  }
}

inline RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  try {
    c.n = j.value("n", 1);
    if (c.n < 1) throw ConfigError("n must be at least 1");
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      c.grid.r_min = g.value("r_min", c.grid.r_min);
      c.grid.r_max = g.value("r_max", c.grid.r_max);
      c.grid.points = g.value("points", c.grid.points);
    }
    c.operator_text = j.value("operator", c.operator_text);
    if (j.contains("source")) {
      const auto& s = j.at("source");
      c.p = s.value("p", c.p);
      c.source_weight = s.value("weight", c.source_weight);
    }
    if (!(c.p >= 1.0) || !std::isfinite(c.p)) throw ConfigError("source exponent p must lie in [1, inf)");
    c.target_json = j.value("target", json{{"space", "lebesgue"}, {"p", c.p}});
    if (j.contains("space")) c.function_space_json = j.at("space");
    c.function_text = j.value("function", "");
    c.params = j.value("params", std::vector<double>{});
    if (j.contains("family")) {
      Family f;
      for (const auto& m : j.at("family")) {
        FamilyMember fm{parse_family_kind(m.at("kind").get<std::string>()), m.at("params").get<std::vector<double>>()};
        if (fm.params.size() != family_param_count(fm.kind))
          throw ConfigError(std::string("family member ") + family_kind_name(fm.kind) + ": wrong parameter count");
        f.members.push_back(std::move(fm));
      }
      c.family = std::move(f);
    }
    if (j.contains("tolerance")) {
      const auto& t = j.at("tolerance");
      c.sandwich_tol = t.value("sandwich", c.sandwich_tol);
      c.refine_iterations = t.value("refine_iterations", c.refine_iterations);
      c.family_iterations = t.value("family_iterations", c.family_iterations);
    }
    c.jobs = j.value("jobs", c.jobs);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

/// Applies the command-line grid and job overrides, then checks that every
/// expression in the config parses.
inline void finalize_config(RunConfig& c) {
  if (!(c.grid.r_min > 0.0) || !(c.grid.r_max > c.grid.r_min) || c.grid.points < 16)
    throw ConfigError("grid: require 0 < r_min < r_max and at least 16 points");
  c.op();
  c.v();
  c.target();
  if (!c.function_space_json.is_null()) c.function_space();
  validate_params(c);
}

inline std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

/// The fully resolved config, embedded in every report.
inline json config_to_json(const RunConfig& c) {
  json j;
  j["n"] = c.n;
  j["grid"] = {{"r_min", c.grid.r_min}, {"r_max", c.grid.r_max}, {"points", c.grid.points}};
  j["operator"] = c.operator_text;
  j["source"] = {{"p", c.p}, {"weight", c.source_weight}};
  j["target"] = c.target_json;
  if (!c.function_space_json.is_null()) j["space"] = c.function_space_json;
  if (!c.function_text.empty()) j["function"] = c.function_text;
  j["params"] = c.params;
  if (c.family) {
    json fam = json::array();
    for (const auto& m : c.family->members) fam.push_back({{"kind", family_kind_name(m.kind)}, {"params", m.params}});
    j["family"] = fam;
  }
  j["tolerance"] = {{"sandwich", c.sandwich_tol}, {"refine_iterations", c.refine_iterations}, {"family_iterations", c.family_iterations}};
  j["jobs"] = c.jobs;
  return j;
}

// ---------------------------------------------------------------------------
// reports

struct ReportCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  json config;
  std::vector<CriterionReport> results;
  std::optional<BoundsReport> bounds;
  std::optional<EstimateReport> estimate;
  std::optional<double> value;  ///< norm command
  std::string verdict;
  std::vector<ReportCheck> checks;
};

inline json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json member_to_json(const FamilyMember& m) { return {{"kind", family_kind_name(m.kind)}, {"params", m.params}}; }

inline json report_to_json(const Report& r) {
  json j;
  j["schema"] = 1;
  j["config"] = r.config;
  json res = json::array();
  for (const auto& c : r.results) {
    json e;
    e["params"] = {{c.name == "D" ? "s" : c.name == "B" ? "gamma" : "alpha", c.param}};
    e["value"] = c.finite ? json(c.value) : json("divergent");
    e["argmax_t"] = number_or_null(c.argmax_t);
    e["stability"] = number_or_null(c.stability);
    if (!c.diagnostic.empty()) e["diagnostic"] = c.diagnostic;
    res.push_back(e);
  }
  if (r.value) res.push_back({{"params", json::object()}, {"value", std::isfinite(*r.value) ? json(*r.value) : json("divergent")},
                              {"argmax_t", nullptr}, {"stability", nullptr}});
  j["results"] = res;
  if (r.bounds) j["bounds"] = {{"lower", number_or_null(r.bounds->lower)}, {"upper", number_or_null(r.bounds->upper)}, {"M", number_or_null(r.bounds->M)}};
  else j["bounds"] = nullptr;
  if (r.estimate) j["estimate"] = {{"C_est", number_or_null(r.estimate->C_est)}, {"member", member_to_json(r.estimate->best_member)}};
  else j["estimate"] = nullptr;
  if (!r.verdict.empty()) j["verdict"] = r.verdict;
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  j["checks"] = checks;
  return j;
}

/// One row per parameter point: param, value, argmax_t, stability.
inline std::string report_to_csv(const Report& r) {
  std::ostringstream os;
  os << "param,value,argmax_t,stability\n";
  auto cell = [](double x) { return std::isfinite(x) ? format_number(x) : std::string(); };
  for (const auto& c : r.results)
    os << format_number(c.param) << ',' << (c.finite ? format_number(c.value) : "divergent") << ',' << cell(c.argmax_t) << ','
       << cell(c.stability) << '\n';
  if (r.value) os << ',' << (std::isfinite(*r.value) ? format_number(*r.value) : "divergent") << ",,\n";
  return os.str();
}

}  // namespace whardy
