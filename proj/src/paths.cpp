#include "discflux/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "discflux/error.hpp"

namespace discflux {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, tol, 24);
}

struct Candidate {
  double value;
  double y;
  double u;
};

DirectOptimum pick_best(const std::vector<Candidate>& cands, Side side) {
  double best = kInf;
  for (const auto& c : cands) best = std::min(best, c.value);
  const double tol = 1e-12 * std::max(1.0, std::abs(best));
  const Candidate* chosen = nullptr;
  for (const auto& c : cands) {
    if (c.value > best + tol) continue;
    if (chosen == nullptr || (side == Side::positive ? c.y < chosen->y : c.y > chosen->y)) chosen = &c;
  }
  return {chosen->value, chosen->y, chosen->u};
}

// q in [lo, hi] with h'(q) = p, for p already known to lie in [h'(lo), h'(hi)].
double local_deriv_inverse(const ConvexFlux& h, double p, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (h.deriv(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(h.deriv(lo) - p) <= std::abs(h.deriv(hi) - p) ? lo : hi;
}

}  // namespace

std::vector<ControlCurve::Vertex> ControlCurve::vertices() const {
  std::vector<Vertex> v;
  if (direct()) {
    v = {{0.0, y}, {t, x}};
    return v;
  }
  v.push_back({0.0, y});
  if (t2 > 0.0) v.push_back({t2, 0.0});
  if (t1 > t2) v.push_back({t1, 0.0});
  if (t > t1) v.push_back({t, x});
  return v;
}

double ControlCurve::position(double s) const {
  const auto v = vertices();
  if (s <= v.front().time) return v.front().pos;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (s <= v[i].time) {
      const double w = (s - v[i - 1].time) / (v[i].time - v[i - 1].time);
      return v[i - 1].pos + w * (v[i].pos - v[i - 1].pos);
    }
  }
  return v.back().pos;
}

ControlCurve make_curve(double t, double x, double y, double t2, double t1, Side side) {
  if (!(t > 0.0) || t2 < 0.0 || t2 > t1 || t1 > t) {
    throw Error(ErrorKind::TimeOrderViolation, "control curve needs 0 <= t2 <= t1 <= t, t > 0");
  }
  const double s = side_sign(side);
  if (s * x < 0.0 || s * y < 0.0) {
    throw Error(ErrorKind::SignViolation, "control curve leaves its side of the interface");
  }
  if (t1 == 0.0 && t2 != 0.0) {
    throw Error(ErrorKind::TimeOrderViolation, "control curve: t2 > 0 with t1 == 0");
  }
  if (t1 > 0.0 && t2 == 0.0 && y != 0.0) {
    throw Error(ErrorKind::TimeOrderViolation, "control curve reaches the interface in zero time");
  }
  if (t1 == t && t1 > 0.0 && x != 0.0) {
    throw Error(ErrorKind::TimeOrderViolation, "control curve leaves the interface in zero time");
  }
  return ControlCurve{t, x, y, t2, t1, side};
}

InitialProfile InitialProfile::piecewise_constant(std::vector<double> breaks, std::vector<double> values,
                                                  std::string label) {
  if (values.size() != breaks.size() + 1) {
    throw Error(ErrorKind::InvalidConfig, "piecewise data: need one more value than breaks");
  }
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (!(breaks[i] > breaks[i - 1])) {
      throw Error(ErrorKind::InvalidConfig, "piecewise data: breaks must increase strictly");
    }
  }
  InitialProfile p;
  p.label_ = std::move(label);
  p.range_ = {*std::min_element(values.begin(), values.end()), *std::max_element(values.begin(), values.end())};

  // Primitive measured from the first break, then shifted so v0(0) = 0.
  const std::size_t K = breaks.size();
  std::vector<double> cum(K, 0.0);
  for (std::size_t k = 1; k < K; ++k) cum[k] = cum[k - 1] + values[k] * (breaks[k] - breaks[k - 1]);
  auto from_first = [&](double x) {
    if (K == 0) return values[0] * x;
    if (x < breaks[0]) return -values[0] * (breaks[0] - x);
    const std::size_t k = std::upper_bound(breaks.begin(), breaks.end(), x) - breaks.begin();
    return cum[k - 1] + values[k] * (x - breaks[k - 1]);
  };
  const double shift = K == 0 ? 0.0 : from_first(0.0);
  p.break_v0_.resize(K);
  for (std::size_t k = 0; k < K; ++k) p.break_v0_[k] = cum[k] - shift;
  if (K == 0) p.break_v0_.clear();

  if (K > 0 && values.front() == 0.0 && values.back() == 0.0) {
    double M = 0.0;
    for (double b : breaks) M = std::max(M, std::abs(b));
    p.support_ = M;
  } else if (K == 0 && values[0] == 0.0) {
    p.support_ = 0.0;
  }
  p.piecewise_ = PiecewiseConstant{std::move(breaks), std::move(values)};
  return p;
}

InitialProfile InitialProfile::from_function(std::function<double(double)> u0, Interval table_domain,
                                             std::string label, int cells) {
  InitialProfile p;
  p.label_ = std::move(label);
  p.fn_ = std::move(u0);
  const double lo = std::min(table_domain.lo, 0.0);
  const double hi = std::max(table_domain.hi, 0.0);
  p.table_domain_ = {lo, hi};
  const int n_left = lo < 0.0 ? std::max(1, static_cast<int>(std::lround(cells * (-lo) / (hi - lo)))) : 0;
  const int n_right = hi > 0.0 ? std::max(1, cells - n_left) : 0;

  std::vector<double> xs;
  for (int i = 0; i < n_left; ++i) xs.push_back(lo + (-lo) * i / n_left);
  for (int i = 0; i <= n_right; ++i) xs.push_back(hi * i / std::max(1, n_right));
  if (n_right == 0) xs.push_back(0.0);
  std::vector<double> v(xs.size(), 0.0);
  const std::size_t zero = static_cast<std::size_t>(n_left);
  for (std::size_t i = zero + 1; i < xs.size(); ++i) {
    v[i] = v[i - 1] + adaptive_simpson(p.fn_, xs[i - 1], xs[i], 1e-10 * (xs[i] - xs[i - 1]));
  }
  for (std::size_t i = zero; i-- > 0;) {
    v[i] = v[i + 1] - adaptive_simpson(p.fn_, xs[i], xs[i + 1], 1e-10 * (xs[i + 1] - xs[i]));
  }
  double umin = kInf, umax = -kInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (double s : {xs[i], i + 1 < xs.size() ? 0.5 * (xs[i] + xs[i + 1]) : xs[i]}) {
      const double u = p.fn_(s);
      umin = std::min(umin, u);
      umax = std::max(umax, u);
    }
  }
  p.range_ = {umin, umax};
  p.table_x_ = std::move(xs);
  p.table_v0_ = std::move(v);
  return p;
}

InitialProfile InitialProfile::sampled(const std::vector<double>& xs, const std::vector<double>& us,
                                       std::string label) {
  if (xs.size() != us.size() || xs.empty()) {
    throw Error(ErrorKind::InvalidConfig, "sampled data: xs and us must be non-empty and equal length");
  }
  std::vector<double> breaks;
  for (std::size_t i = 1; i < xs.size(); ++i) breaks.push_back(0.5 * (xs[i - 1] + xs[i]));
  return piecewise_constant(std::move(breaks), us, std::move(label));
}

double InitialProfile::u0(double x) const {
  if (piecewise_) {
    const auto& b = piecewise_->breaks;
    return piecewise_->values[std::upper_bound(b.begin(), b.end(), x) - b.begin()];
  }
  return fn_(x);
}

double InitialProfile::u0_left(double x) const {
  if (piecewise_) {
    const auto& b = piecewise_->breaks;
    return piecewise_->values[std::lower_bound(b.begin(), b.end(), x) - b.begin()];
  }
  return fn_(x);
}

double InitialProfile::v0(double x) const {
  if (piecewise_) {
    const auto& b = piecewise_->breaks;
    const auto& vals = piecewise_->values;
    if (b.empty()) return vals[0] * x;
    const std::size_t k = std::upper_bound(b.begin(), b.end(), x) - b.begin();
    if (k == 0) return break_v0_[0] - vals[0] * (b[0] - x);
    return break_v0_[k - 1] + vals[k] * (x - b[k - 1]);
  }
  const auto& xs = table_x_;
  if (x <= xs.front()) return table_v0_.front() - fn_(xs.front()) * (xs.front() - x);
  if (x >= xs.back()) return table_v0_.back() + fn_(xs.back()) * (x - xs.back());
  const std::size_t k = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
  const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return table_v0_[k - 1] + w * (table_v0_[k] - table_v0_[k - 1]);
}

double InitialProfile::sup_norm() const { return std::max(std::abs(range_.lo), std::abs(range_.hi)); }

double cost_J(const ControlCurve& curve, const InitialProfile& data, const ConvexFlux& h) {
  const auto v = curve.vertices();
  double cost = data.v0(curve.y);
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double dur = v[i].time - v[i - 1].time;
    const double slope = (v[i].pos - v[i - 1].pos) / dur;
    try {
      cost += dur * legendre(h, slope);
    } catch (const Error& e) {
      throw Error(ErrorKind::SlopeOutOfRange, e.what());
    }
  }
  return cost;
}

double cost_Jpm(const ControlCurve& curve, const InitialProfile& data, const ConvexFlux& h, Side side) {
  const auto v = curve.vertices();
  const double s = side_sign(side);
  double cost = data.v0(curve.y);
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double mid = 0.5 * (v[i].pos + v[i - 1].pos);
    if (!(s * mid > 0.0)) continue;  // on the interface or on the other side
    const double dur = v[i].time - v[i - 1].time;
    const double slope = (v[i].pos - v[i - 1].pos) / dur;
    try {
      cost += dur * legendre(h, slope);
    } catch (const Error& e) {
      throw Error(ErrorKind::SlopeOutOfRange, e.what());
    }
  }
  return cost;
}

DirectOptimum minimize_direct(double x, double t, const InitialProfile& data, const ConvexFlux& h,
                              Side side) {
  const Interval slopes = h.slope_range();
  const Interval range = data.value_range();
  const double s_lo = h.deriv(range.lo);
  const double s_hi = h.deriv(range.hi);
  const double d_lo = side == Side::positive ? 0.0 : -kInf;
  const double d_hi = side == Side::positive ? kInf : 0.0;

  std::vector<Candidate> cands;

  // Boundary foot y = 0, always admissible when its slope is.
  {
    const double p0 = x / t;
    if (p0 >= slopes.lo && p0 <= slopes.hi) {
      const double q = deriv_inverse(h, p0);
      cands.push_back({data.v0(0.0) + t * legendre_at(h, p0, q), 0.0, q});
    }
  }

  if (data.is_piecewise()) {
    const auto& pc = data.pieces();
    const auto& b = pc.breaks;
    const auto& vals = pc.values;
    const double w_lo = std::max(x - t * s_hi, d_lo);
    const double w_hi = std::min(x - t * s_lo, d_hi);
    if (w_lo <= w_hi) {
      const std::size_t k0 = std::upper_bound(b.begin(), b.end(), w_lo) - b.begin();
      const std::size_t k1 = std::upper_bound(b.begin(), b.end(), w_hi) - b.begin();
      // Interior stationary points: y = x - t h'(u_k) inside piece k.
      for (std::size_t k = k0; k <= k1 && k < vals.size(); ++k) {
        const double uk = vals[k];
        const double ys = x - t * h.deriv(uk);
        const double plo = k == 0 ? -kInf : b[k - 1];
        const double phi = k == b.size() ? kInf : b[k];
        if (ys < plo || ys > phi || ys < d_lo || ys > d_hi) continue;
        cands.push_back({data.v0(ys) + t * legendre_at(h, h.deriv(uk), uk), ys, uk});
      }
      // Breaks where an increasing jump fans out over x.
      for (std::size_t j = k0; j < k1 && j < b.size(); ++j) {
        const double bj = b[j];
        if (bj < w_lo || bj > w_hi) continue;
        const double ul = vals[j];
        const double ur = vals[j + 1];
        if (!(ul < ur)) continue;
        const double p = (x - bj) / t;
        if (p < h.deriv(ul) || p > h.deriv(ur)) continue;
        const double q = local_deriv_inverse(h, p, ul, ur);
        cands.push_back({data.v0(bj) + t * legendre_at(h, p, q), bj, q});
      }
    }
  } else {
    // Scan the first-order condition zeta(y) = y + t h'(u0(y)) - x for
    // sign changes from - to +, then bisect each one.
    const double pad = 1e-9 * (1.0 + std::abs(x) + t);
    const double w_lo = std::max(x - t * s_hi - pad, d_lo);
    const double w_hi = std::min(x - t * s_lo + pad, d_hi);
    if (w_lo < w_hi) {
      auto zeta = [&](double y) { return y + t * h.deriv(data.u0(y)) - x; };
      constexpr int kScan = 2048;
      double y_prev = w_lo;
      double z_prev = zeta(y_prev);
      for (int i = 1; i <= kScan; ++i) {
        const double y_cur = w_lo + (w_hi - w_lo) * i / kScan;
        const double z_cur = zeta(y_cur);
        if (z_prev < 0.0 && z_cur >= 0.0) {
          double lo = y_prev, hi = y_cur;
          for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (zeta(mid) < 0.0 ? lo : hi) = mid;
          }
          const double ys = hi;
          const double p = (x - ys) / t;
          if (p >= slopes.lo && p <= slopes.hi) {
            const double q = deriv_inverse(h, p);
            cands.push_back({data.v0(ys) + t * legendre_at(h, p, q), ys, q});
          }
        }
        y_prev = y_cur;
        z_prev = z_cur;
      }
    }
  }

  if (cands.empty()) {
    throw Error(ErrorKind::SlopeOutOfRange, "no admissible direct foot; flux bracket too small for x/t");
  }
  return pick_best(cands, side);
}

}  // namespace discflux
