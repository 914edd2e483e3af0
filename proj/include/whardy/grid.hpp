#pragma once

// Radial grids and the geometric constants of polar reduction on R^n.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace whardy {

/// Thrown when an integral, norm or criterion functional is infinite.
/// Carries the last two decade contributions when the decade test fired.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what,
                           double previous = std::numeric_limits<double>::quiet_NaN(),
                           double last = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), previous_(previous), last_(last) {}

  double previous_contribution() const noexcept { return previous_; }
  double last_contribution() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

/// |B(0,1)| = pi^{n/2} / Gamma(n/2 + 1).
inline double unit_ball_volume(int n) {
  if (n < 1) throw std::invalid_argument("unit_ball_volume: dimension must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

/// omega_{n-1} = n |B(0,1)|, the surface measure of the unit sphere.
inline double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

/// |B(0,r)|
inline double ball_volume(int n, double r) { return unit_ball_volume(n) * std::pow(r, n); }

/// Strictly increasing positive radii together with the ambient dimension.
/// Cheap to copy; node storage is shared and immutable.
class RadialGrid {
 public:
  RadialGrid(int n, std::vector<double> nodes) {
    if (n < 1) throw std::invalid_argument("RadialGrid: dimension must be >= 1");
    if (nodes.size() < 2) throw std::invalid_argument("RadialGrid: need at least two nodes");
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (!(nodes[k] > 0.0) || !std::isfinite(nodes[k]))
        throw std::invalid_argument("RadialGrid: nodes must be positive and finite");
      if (k > 0 && !(nodes[k] > nodes[k - 1]))
        throw std::invalid_argument("RadialGrid: nodes must be strictly increasing");
    }
    auto d = std::make_shared<Data>();
    d->n = n;
    d->log_r.resize(nodes.size());
    std::transform(nodes.begin(), nodes.end(), d->log_r.begin(), [](double r) { return std::log(r); });
    d->r = std::move(nodes);
    d_ = std::move(d);
  }

  int dimension() const noexcept { return d_->n; }
  std::size_t size() const noexcept { return d_->r.size(); }
  std::span<const double> nodes() const noexcept { return d_->r; }
  double node(std::size_t k) const { return d_->r[k]; }
  double log_node(std::size_t k) const { return d_->log_r[k]; }
  double r_min() const noexcept { return d_->r.front(); }
  double r_max() const noexcept { return d_->r.back(); }

  /// Index of the node equal to r (relative 1e-12), if any.
  std::optional<std::size_t> find_node(double r) const {
    const auto& v = d_->r;
    auto it = std::lower_bound(v.begin(), v.end(), r * (1.0 - 1e-12));
    if (it != v.end() && std::abs(*it - r) <= 1e-12 * r) return static_cast<std::size_t>(it - v.begin());
    return std::nullopt;
  }

  /// Segment k with r_k <= r <= r_{k+1}, clamped to [0, K-2].
  std::size_t segment(double r) const {
    const auto& v = d_->r;
    auto it = std::upper_bound(v.begin(), v.end(), r);
    std::ptrdiff_t k = (it - v.begin()) - 1;
    k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(v.size()) - 2);
    return static_cast<std::size_t>(k);
  }

  /// Grid with the given radii present as nodes. A radius falling within 5% of a
  /// log-step of an existing node replaces that node instead of being inserted,
  /// so no degenerate segments appear. Non-finite or non-positive radii are skipped.
  RadialGrid with_nodes(std::span<const double> radii) const {
    std::vector<double> r(d_->r.begin(), d_->r.end());
    bool changed = false;
    for (double x : radii) {
      if (!(x > 0.0) || !std::isfinite(x)) continue;
      auto it = std::lower_bound(r.begin(), r.end(), x);
      std::size_t k = static_cast<std::size_t>(it - r.begin());
      if (k < r.size() && r[k] == x) continue;
      const double lx = std::log(x);
      // nearest neighbour in log space and its local spacing
      std::size_t best = (k == r.size()) ? r.size() - 1 : k;
      if (k > 0 && (k == r.size() || lx - std::log(r[k - 1]) < std::log(r[k]) - lx)) best = k - 1;
      double h = 0.0;
      if (best + 1 < r.size()) h = std::log(r[best + 1]) - std::log(r[best]);
      if (best > 0) h = std::max(h, std::log(r[best]) - std::log(r[best - 1]));
      if (std::abs(lx - std::log(r[best])) < 0.05 * h) {
        r[best] = x;
      } else {
        r.insert(r.begin() + static_cast<std::ptrdiff_t>(k), x);
      }
      changed = true;
    }
    if (!changed) return *this;
    return RadialGrid(d_->n, std::move(r));
  }

  RadialGrid with_nodes(std::initializer_list<double> radii) const {
    return with_nodes(std::span<const double>(radii.begin(), radii.size()));
  }

  /// Nodes inside [lo, hi].
  RadialGrid truncated(double lo, double hi) const {
    std::vector<double> r;
    for (double x : d_->r)
      if (x >= lo * (1.0 - 1e-12) && x <= hi * (1.0 + 1e-12)) r.push_back(x);
    return RadialGrid(d_->n, std::move(r));
  }

  /// Every node multiplied by factor.
  RadialGrid scaled(double factor) const {
    std::vector<double> r(d_->r.begin(), d_->r.end());
    for (double& x : r) x *= factor;
    return RadialGrid(d_->n, std::move(r));
  }

  RadialGrid with_dimension(int n) const { return RadialGrid(n, std::vector<double>(d_->r.begin(), d_->r.end())); }

  friend bool operator==(const RadialGrid& a, const RadialGrid& b) {
    return a.d_ == b.d_ || (a.d_->n == b.d_->n && a.d_->r == b.d_->r);
  }

 private:
  struct Data {
    int n = 1;
    std::vector<double> r;
    std::vector<double> log_r;
  };
  std::shared_ptr<const Data> d_;
};

/// Geometrically spaced nodes from r_min to r_max inclusive.
inline RadialGrid make_log_grid(int n, double r_min, double r_max, std::size_t points) {
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max))
    throw std::invalid_argument("make_log_grid: require 0 < r_min < r_max < inf");
  if (points < 2) throw std::invalid_argument("make_log_grid: need at least two points");
  std::vector<double> r(points);
  const double a = std::log(r_min);
  const double b = std::log(r_max);
  for (std::size_t k = 0; k < points; ++k)
    r[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(points - 1));
  r.front() = r_min;
  r.back() = r_max;
  return RadialGrid(n, std::move(r));
}

struct GridParams {
  double r_min = 1e-6;
  double r_max = 1e6;
  std::size_t points = 400;
};

/// The criterion grid: 400 log points across [1e-6, 1e6].
inline RadialGrid default_grid(int n, const GridParams& g = {}) {
  return make_log_grid(n, g.r_min, g.r_max, g.points);
}

}  // namespace whardy
