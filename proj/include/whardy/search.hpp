#pragma once

// Golden-section maximisation and a small deterministic parallel map.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace whardy {

struct SearchResult {
  double x = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

/// Maximises f on [a, b] by golden-section search. NaN values count as -inf,
/// so the search moves away from parameters where f is undefined. The best
/// point ever evaluated is returned, which makes the result no worse than the
/// endpoints that were probed.
inline SearchResult golden_section_max(const std::function<double(double)>& f, double a, double b, int iterations = 60,
                                       double abs_tol = 0.0) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  SearchResult best;
  bool any = false;
  auto eval = [&](double x) {
    double v = f(x);
    if (std::isnan(v)) v = -std::numeric_limits<double>::infinity();
    if (!any || v > best.value) {
      any = true;
      best.value = v;
      best.x = x;
    }
    return v;
  };
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = eval(c), fd = eval(d);
  for (int i = 0; i < iterations && (b - a) > abs_tol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  return best;
}

/// Worker count: jobs <= 0 means one per hardware thread.
inline unsigned resolve_jobs(int jobs) {
  if (jobs > 0) return static_cast<unsigned>(jobs);
  return std::max(1u, std::thread::hardware_concurrency());
}

/// out[i] = fn(i) for i < count, computed by up to `jobs` threads. Results are
/// placed by index, so the output does not depend on scheduling. The first
/// exception thrown by any task is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t count, int jobs, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(count);
  const unsigned workers = std::min<std::size_t>(resolve_jobs(jobs), std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace whardy
