#pragma once

// Radial functions sampled on a RadialGrid.
//
// Between nodes a function is reconstructed in log-log coordinates: on every
// run of strictly positive samples without a break, ln g is interpolated in
// u = ln r by a local Lagrange polynomial of degree <= 5. Pure power laws are
// therefore reproduced exactly. Segments touching a zero or negative sample are
// interpolated linearly in r. Outside [r_min, r_max] the function continues as
// a power law whose exponent is either tagged explicitly or read off the
// interpolant at the end node.
//
// A node may carry a break: distinct left and right limits (a jump) or a kink.
// Interpolation never reaches across a break.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "whardy/grid.hpp"

namespace whardy {

enum class Side { left, right };

class RadialFunction {
 public:
  using Tail = std::optional<double>;

  RadialFunction(RadialGrid grid, std::vector<double> values, Tail tail_low = {}, Tail tail_high = {})
      : grid_(std::move(grid)), left_(std::move(values)), tail_low_(tail_low), tail_high_(tail_high) {
    right_ = left_;
    breaks_.assign(left_.size(), 0);
    validate();
  }

  RadialFunction(RadialGrid grid, std::vector<double> left, std::vector<double> right,
                 std::vector<unsigned char> breaks, Tail tail_low = {}, Tail tail_high = {})
      : grid_(std::move(grid)),
        left_(std::move(left)),
        right_(std::move(right)),
        breaks_(std::move(breaks)),
        tail_low_(tail_low),
        tail_high_(tail_high) {
    validate();
  }

  /// Samples f(r, side) on the grid. Nodes coinciding with one of `breakpoints`
  /// become breaks and get both one-sided limits.
  template <class F>
  static RadialFunction sample(const RadialGrid& grid, F&& f, std::span<const double> breakpoints = {},
                               Tail tail_low = {}, Tail tail_high = {}) {
    const std::size_t K = grid.size();
    std::vector<double> l(K), r(K);
    std::vector<unsigned char> b(K, 0);
    for (std::size_t k = 0; k < K; ++k) {
      const double x = grid.node(k);
      if constexpr (std::is_invocable_v<F, double, Side>) {
        l[k] = f(x, Side::left);
        r[k] = f(x, Side::right);
      } else {
        l[k] = r[k] = f(x);
      }
    }
    for (double bp : breakpoints)
      if (auto k = grid.find_node(bp)) b[*k] = 1;
    return RadialFunction(grid, std::move(l), std::move(r), std::move(b), tail_low, tail_high);
  }

  static RadialFunction constant(const RadialGrid& grid, double c) {
    return RadialFunction(grid, std::vector<double>(grid.size(), c), 0.0, 0.0);
  }

  const RadialGrid& grid() const noexcept { return grid_; }
  int dimension() const noexcept { return grid_.dimension(); }
  std::size_t size() const noexcept { return left_.size(); }

  /// Left limit at node k; equals the right limit except at jumps.
  double value(std::size_t k) const { return left_[k]; }
  double left(std::size_t k) const { return left_[k]; }
  double right(std::size_t k) const { return right_[k]; }
  bool is_break(std::size_t k) const { return breaks_[k] != 0; }
  std::span<const double> values() const noexcept { return left_; }
  std::span<const double> right_values() const noexcept { return right_; }
  std::span<const unsigned char> breaks() const noexcept { return breaks_; }
  Tail tail_low() const noexcept { return tail_low_; }
  Tail tail_high() const noexcept { return tail_high_; }

  /// Radii of break nodes.
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    for (std::size_t k = 0; k < size(); ++k)
      if (breaks_[k]) out.push_back(grid_.node(k));
    return out;
  }

  RadialFunction with_tails(Tail low, Tail high) const {
    RadialFunction f = *this;
    f.tail_low_ = low;
    f.tail_high_ = high;
    return f;
  }

  bool all_of(const std::function<bool(double)>& pred) const {
    return std::all_of(left_.begin(), left_.end(), pred) && std::all_of(right_.begin(), right_.end(), pred);
  }

  double max_abs() const {
    double m = 0.0;
    for (std::size_t k = 0; k < size(); ++k) m = std::max({m, std::abs(left_[k]), std::abs(right_[k])});
    return m;
  }

  /// Interpolated value at any radius. At a jump node, side selects the limit.
  double at(double r, Side side = Side::left) const;

 private:
  void validate() const {
    if (left_.size() != grid_.size() || right_.size() != grid_.size() || breaks_.size() != grid_.size())
      throw std::invalid_argument("RadialFunction: sample count must equal node count");
    for (std::size_t k = 0; k < left_.size(); ++k)
      if (!std::isfinite(left_[k]) || !std::isfinite(right_[k]))
        throw std::invalid_argument("RadialFunction: samples must be finite");
  }
  friend class Interpolant;

  RadialGrid grid_;
  std::vector<double> left_;
  std::vector<double> right_;
  std::vector<unsigned char> breaks_;
  Tail tail_low_;
  Tail tail_high_;
};

namespace detail {

inline constexpr std::array<double, 8> kGaussX = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                                  -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                                  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGaussW = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                                  0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                                  0.2223810344533745, 0.1012285362903763};

inline constexpr std::size_t kStencil = 6;

}  // namespace detail

/// Piecewise reconstruction of a RadialFunction; see the file comment.
class Interpolant {
 public:
  explicit Interpolant(const RadialFunction& f) : f_(f), grid_(f.grid()) {
    const std::size_t K = grid_.size();
    seg_.resize(K - 1);
    std::size_t run_start = 0;
    for (std::size_t k = 0; k + 1 < K; ++k) {
      const bool pos = f.right_[k] > 0.0 && f.left_[k + 1] > 0.0;
      const bool cont = k > 0 && pos && seg_[k - 1].log_mode && !f.breaks_[k];
      if (!cont) run_start = k;
      seg_[k].log_mode = pos;
      seg_[k].run_start = run_start;
    }
    // close runs
    for (std::size_t k = K - 1; k-- > 0;) {
      if (!seg_[k].log_mode) continue;
      const bool cont = k + 2 < K && seg_[k + 1].log_mode && seg_[k + 1].run_start == seg_[k].run_start;
      seg_[k].run_end = cont ? seg_[k + 1].run_end : k + 1;
    }
    for (std::size_t k = 0; k + 1 < K; ++k) {
      auto& s = seg_[k];
      if (!s.log_mode) continue;
      const std::size_t nodes = s.run_end - s.run_start + 1;
      const std::size_t m = std::min(nodes, detail::kStencil);
      std::ptrdiff_t j0 = static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>((m - 1) / 2);
      j0 = std::clamp<std::ptrdiff_t>(j0, static_cast<std::ptrdiff_t>(s.run_start),
                                      static_cast<std::ptrdiff_t>(s.run_end + 1 - m));
      s.j0 = static_cast<std::size_t>(j0);
      s.m = m;
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = s.j0 + i;
        s.u[i] = grid_.log_node(j);
        const double v = (j == s.run_start) ? f.right_[j] : f.left_[j];
        s.y[i] = std::log(v);
      }
    }
  }

  const RadialGrid& grid() const noexcept { return grid_; }
  bool log_mode(std::size_t k) const { return seg_[k].log_mode; }

  /// ln g(e^u) on a log-mode segment.
  double log_value(std::size_t k, double u) const {
    const auto& s = seg_[k];
    double acc = 0.0;
    for (std::size_t i = 0; i < s.m; ++i) {
      double l = 1.0;
      for (std::size_t j = 0; j < s.m; ++j)
        if (j != i) l *= (u - s.u[j]) / (s.u[i] - s.u[j]);
      acc += s.y[i] * l;
    }
    return acc;
  }

  /// d ln g / d ln r at node j (which must be in the stencil of segment k).
  double log_slope_at_node(std::size_t k, std::size_t node) const {
    const auto& s = seg_[k];
    const std::size_t si = node - s.j0;
    double d = 0.0;
    for (std::size_t i = 0; i < s.m; ++i) {
      if (i == si) {
        double sum = 0.0;
        for (std::size_t j = 0; j < s.m; ++j)
          if (j != si) sum += 1.0 / (s.u[si] - s.u[j]);
        d += s.y[i] * sum;
      } else {
        double l = 1.0 / (s.u[i] - s.u[si]);
        for (std::size_t j = 0; j < s.m; ++j)
          if (j != i && j != si) l *= (s.u[si] - s.u[j]) / (s.u[i] - s.u[j]);
        d += s.y[i] * l;
      }
    }
    return d;
  }

  double value(std::size_t k, double r) const {
    if (seg_[k].log_mode) return std::exp(log_value(k, std::log(r)));
    const double r0 = grid_.node(k), r1 = grid_.node(k + 1);
    const double y0 = f_.right_[k], y1 = f_.left_[k + 1];
    return y0 + (y1 - y0) * (r - r0) / (r1 - r0);
  }

  /// Power-law exponent used below r_min.
  double low_exponent() const {
    if (f_.tail_low_) return *f_.tail_low_;
    if (seg_.front().log_mode) return log_slope_at_node(0, 0);
    return 0.0;
  }

  /// Power-law exponent used above r_max.
  double high_exponent() const {
    if (f_.tail_high_) return *f_.tail_high_;
    const std::size_t K = grid_.size();
    if (seg_.back().log_mode) return log_slope_at_node(K - 2, K - 1);
    return 0.0;
  }

  /// Values continued by the tails: the outer one-sided limits at the end nodes.
  double low_anchor() const { return f_.left_.front(); }
  double high_anchor() const { return f_.right_.back(); }

  /// omega_{n-1} * integral of r^{n-1} g(r) dr over [ra, rb], a sub-interval of segment k.
  double integrate_segment(std::size_t k, double ra, double rb) const {
    const int n = grid_.dimension();
    const double omega = unit_sphere_area(n);
    if (!(rb > ra)) return 0.0;
    if (!seg_[k].log_mode) {
      const double r0 = grid_.node(k), r1 = grid_.node(k + 1);
      const double y0 = f_.right_[k], y1 = f_.left_[k + 1];
      const double B = (y1 - y0) / (r1 - r0);
      const double A = y0 - B * r0;
      return omega * (A * (std::pow(rb, n) - std::pow(ra, n)) / n +
                      B * (std::pow(rb, n + 1) - std::pow(ra, n + 1)) / (n + 1));
    }
    const double ua = std::log(ra), ub = std::log(rb);
    const double half = 0.5 * (ub - ua), mid = 0.5 * (ub + ua);
    double acc = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      const double u = mid + half * detail::kGaussX[i];
      acc += detail::kGaussW[i] * std::exp(log_value(k, u) + n * u);
    }
    return omega * half * acc;
  }

  /// Same as integrate_segment but with ln g interpolated linearly; used for error estimates.
  double integrate_segment_loglinear(std::size_t k, double ra, double rb) const {
    if (!seg_[k].log_mode) return integrate_segment(k, ra, rb);
    const int n = grid_.dimension();
    const double omega = unit_sphere_area(n);
    const double u0 = grid_.log_node(k), u1 = grid_.log_node(k + 1);
    const double y0 = std::log(f_.right_[k]), y1 = std::log(f_.left_[k + 1]);
    const double ua = std::log(ra), ub = std::log(rb);
    const double half = 0.5 * (ub - ua), mid = 0.5 * (ub + ua);
    double acc = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      const double u = mid + half * detail::kGaussX[i];
      acc += detail::kGaussW[i] * std::exp(y0 + (y1 - y0) * (u - u0) / (u1 - u0) + n * u);
    }
    return omega * half * acc;
  }

  /// omega_{n-1} * integral of r^{n-1} ln g(r) dr over segment k (log-mode only).
  double integrate_log_segment(std::size_t k) const {
    const int n = grid_.dimension();
    const double omega = unit_sphere_area(n);
    const double ua = grid_.log_node(k), ub = grid_.log_node(k + 1);
    const double half = 0.5 * (ub - ua), mid = 0.5 * (ub + ua);
    double acc = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      const double u = mid + half * detail::kGaussX[i];
      acc += detail::kGaussW[i] * log_value(k, u) * std::exp(n * u);
    }
    return omega * half * acc;
  }

 private:
  struct Segment {
    bool log_mode = false;
    std::size_t run_start = 0;
    std::size_t run_end = 0;
    std::size_t j0 = 0;
    std::size_t m = 0;
    std::array<double, detail::kStencil> u{};
    std::array<double, detail::kStencil> y{};
  };

  RadialFunction f_;
  RadialGrid grid_;
  std::vector<Segment> seg_;
};

inline double RadialFunction::at(double r, Side side) const {
  if (auto k = grid_.find_node(r)) return side == Side::left ? left_[*k] : right_[*k];
  Interpolant ip(*this);
  if (r < grid_.r_min()) {
    const double v0 = left_.front();
    return v0 == 0.0 ? 0.0 : v0 * std::pow(r / grid_.r_min(), ip.low_exponent());
  }
  if (r > grid_.r_max()) {
    const double v = right_.back();
    return v == 0.0 ? 0.0 : v * std::pow(r / grid_.r_max(), ip.high_exponent());
  }
  return ip.value(grid_.segment(r), r);
}

// ---------------------------------------------------------------------------
// Pointwise algebra. Operands must live on the same grid.

namespace detail {

inline void require_same_grid(const RadialFunction& a, const RadialFunction& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("RadialFunction: operands on different grids");
}

inline std::optional<double> add_tails(std::optional<double> a, std::optional<double> b) {
  if (a && b) return *a + *b;
  return std::nullopt;
}

}  // namespace detail

/// Applies op to every left/right sample; break flags are kept and tails are
/// given explicitly.
template <class Op>
RadialFunction map(const RadialFunction& f, Op&& op, RadialFunction::Tail low = {}, RadialFunction::Tail high = {}) {
  const std::size_t K = f.size();
  std::vector<double> l(K), r(K);
  for (std::size_t k = 0; k < K; ++k) {
    if constexpr (std::is_invocable_v<Op, double, double>) {
      l[k] = op(f.grid().node(k), f.left(k));
      r[k] = op(f.grid().node(k), f.right(k));
    } else {
      l[k] = op(f.left(k));
      r[k] = op(f.right(k));
    }
  }
  return RadialFunction(f.grid(), std::move(l), std::move(r), std::vector<unsigned char>(f.breaks().begin(), f.breaks().end()), low, high);
}

inline RadialFunction scale(const RadialFunction& f, double c) {
  return map(f, [c](double v) { return c * v; }, f.tail_low(), f.tail_high());
}

inline RadialFunction abs(const RadialFunction& f) {
  return map(f, [](double v) { return std::abs(v); }, f.tail_low(), f.tail_high());
}

inline RadialFunction multiply(const RadialFunction& a, const RadialFunction& b) {
  detail::require_same_grid(a, b);
  const std::size_t K = a.size();
  std::vector<double> l(K), r(K);
  std::vector<unsigned char> br(K);
  for (std::size_t k = 0; k < K; ++k) {
    l[k] = a.left(k) * b.left(k);
    r[k] = a.right(k) * b.right(k);
    br[k] = a.is_break(k) || b.is_break(k);
  }
  return RadialFunction(a.grid(), std::move(l), std::move(r), std::move(br), detail::add_tails(a.tail_low(), b.tail_low()),
                        detail::add_tails(a.tail_high(), b.tail_high()));
}

inline RadialFunction add(const RadialFunction& a, const RadialFunction& b, double ca = 1.0, double cb = 1.0) {
  detail::require_same_grid(a, b);
  const std::size_t K = a.size();
  std::vector<double> l(K), r(K);
  std::vector<unsigned char> br(K);
  for (std::size_t k = 0; k < K; ++k) {
    l[k] = ca * a.left(k) + cb * b.left(k);
    r[k] = ca * a.right(k) + cb * b.right(k);
    br[k] = a.is_break(k) || b.is_break(k);
  }
  RadialFunction::Tail lo, hi;
  if (a.tail_low() && b.tail_low() && *a.tail_low() == *b.tail_low()) lo = a.tail_low();
  if (a.tail_high() && b.tail_high() && *a.tail_high() == *b.tail_high()) hi = a.tail_high();
  return RadialFunction(a.grid(), std::move(l), std::move(r), std::move(br), lo, hi);
}

/// |f|^e, computed in log space so that tiny values underflow cleanly to zero.
inline RadialFunction pow(const RadialFunction& f, double e) {
  auto op = [e](double v) {
    if (v == 0.0) return e > 0.0 ? 0.0 : (e == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
    return std::exp(e * std::log(std::abs(v)));
  };
  RadialFunction::Tail lo, hi;
  if (f.tail_low()) lo = e * *f.tail_low();
  if (f.tail_high()) hi = e * *f.tail_high();
  return map(f, op, lo, hi);
}

/// Zero below node k; at node k the left limit is zero and the right limit is f's.
/// The tail beyond the grid keeps f's exponent, inferred if f carries no tag.
inline RadialFunction cut_below(const RadialFunction& f, std::size_t k) {
  const std::size_t K = f.size();
  std::vector<double> l(f.values().begin(), f.values().end());
  std::vector<double> r(f.right_values().begin(), f.right_values().end());
  std::vector<unsigned char> br(f.breaks().begin(), f.breaks().end());
  for (std::size_t j = 0; j < k && j < K; ++j) l[j] = r[j] = 0.0;
  if (k < K) {
    l[k] = 0.0;
    br[k] = 1;
  }
  RadialFunction::Tail hi = f.tail_high();
  if (!hi) hi = Interpolant(f).high_exponent();
  return RadialFunction(f.grid(), std::move(l), std::move(r), std::move(br), 0.0, hi);
}

/// Zero above node k; at node k the right limit is zero.
inline RadialFunction cut_above(const RadialFunction& f, std::size_t k) {
  const std::size_t K = f.size();
  std::vector<double> l(f.values().begin(), f.values().end());
  std::vector<double> r(f.right_values().begin(), f.right_values().end());
  std::vector<unsigned char> br(f.breaks().begin(), f.breaks().end());
  for (std::size_t j = k + 1; j < K; ++j) l[j] = r[j] = 0.0;
  r[k] = 0.0;
  br[k] = 1;
  RadialFunction::Tail lo = f.tail_low();
  if (!lo) lo = Interpolant(f).low_exponent();
  return RadialFunction(f.grid(), std::move(l), std::move(r), std::move(br), lo, 0.0);
}

/// f re-expressed on another grid by interpolation. Nodes of the new grid that
/// coincide with breaks of f keep both one-sided limits.
inline RadialFunction resample(const RadialFunction& f, const RadialGrid& grid) {
  if (f.grid() == grid) return f;
  Interpolant ip(f);
  const RadialGrid& g0 = f.grid();
  const std::size_t K = grid.size();
  std::vector<double> l(K), r(K);
  std::vector<unsigned char> br(K, 0);
  for (std::size_t k = 0; k < K; ++k) {
    const double x = grid.node(k);
    if (auto j = g0.find_node(x)) {
      l[k] = f.left(*j);
      r[k] = f.right(*j);
      br[k] = f.is_break(*j);
    } else if (x < g0.r_min()) {
      l[k] = r[k] = ip.low_anchor() == 0.0 ? 0.0 : ip.low_anchor() * std::pow(x / g0.r_min(), ip.low_exponent());
    } else if (x > g0.r_max()) {
      l[k] = r[k] = ip.high_anchor() == 0.0 ? 0.0 : ip.high_anchor() * std::pow(x / g0.r_max(), ip.high_exponent());
    } else {
      l[k] = r[k] = ip.value(g0.segment(x), x);
    }
  }
  return RadialFunction(grid, std::move(l), std::move(r), std::move(br), f.tail_low(), f.tail_high());
}

}  // namespace whardy
