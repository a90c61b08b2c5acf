#pragma once

// Brute-force references shared by the unit tests. Nothing here calls the
// library's optimizers.

#include <cmath>
#include <functional>

namespace oracle {

inline double golden_max(const std::function<double(double)>& fn, double a, double b, int iters = 100) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int i = 0; i < iters; ++i) {
    if (fc > fd) {
      b = d, d = c, fd = fc, c = b - r * (b - a), fc = fn(c);
    } else {
      a = c, c = d, fc = fd, d = a + r * (b - a), fd = fn(d);
    }
  }
  return std::max(fc, fd);
}

// sup over q in [lo, hi] of p q - h(q).
inline double conjugate(const std::function<double(double)>& h, double p, double lo, double hi) {
  return golden_max([&](double q) { return p * q - h(q); }, lo, hi);
}

// Dense scan plus golden refinement of a minimum over [lo, hi].
inline double scan_min(const std::function<double(double)>& fn, double lo, double hi, int n = 4000) {
  const double step = (hi - lo) / n;
  int best = 0;
  double bv = fn(lo);
  for (int i = 1; i <= n; ++i) {
    const double v = fn(lo + i * step);
    if (v < bv) bv = v, best = i;
  }
  const double a = lo + std::max(0, best - 1) * step, b = lo + std::min(n, best + 1) * step;
  return std::min(bv, -golden_max([&](double y) { return -fn(y); }, a, b));
}

}  // namespace oracle
