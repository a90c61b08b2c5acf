#include "discflux/flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "discflux/error.hpp"

namespace discflux {

namespace {

// Bisection for a root of a non-decreasing function on [lo, hi]; runs until
// the bracket collapses to adjacent doubles (never fewer than 60 halvings).
template <class F>
double bisect_increasing(F&& fn, double target, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (fn(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double flo = std::abs(fn(lo) - target);
  const double fhi = std::abs(fn(hi) - target);
  return flo <= fhi ? lo : hi;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double golden_min(const std::function<double(double)>& fn, double a, double b, int iters = 120) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int i = 0; i < iters && (b - a) > 1e-15 * (1.0 + std::abs(a)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ConvexFlux::ConvexFlux(std::string label, Fn eval, Fn deriv, Fn deriv2, Interval bracket)
    : label_(std::move(label)),
      eval_(std::move(eval)),
      deriv_(std::move(deriv)),
      deriv2_(std::move(deriv2)),
      bracket_(bracket) {
  if (!(bracket_.lo < bracket_.hi)) {
    throw Error(ErrorKind::InvalidFlux, "flux '" + label_ + "': empty bracket");
  }
  const FluxMinimizer m = find_minimizer(*this);
  theta_ = m.theta;
  min_value_ = m.min_value;
}

FluxMinimizer find_minimizer(const ConvexFlux& h) {
  const Interval b = h.bracket();
  const double dlo = h.deriv(b.lo);
  const double dhi = h.deriv(b.hi);
  if (!(dlo < 0.0 && dhi > 0.0)) {
    throw Error(ErrorKind::NoSignChange, "flux '" + h.label() + "': h' does not change sign on [" +
                                             fmt(b.lo) + ", " + fmt(b.hi) + "]");
  }
  const double theta = bisect_increasing([&](double u) { return h.deriv(u); }, 0.0, b.lo, b.hi);
  return {theta, h(theta)};
}

double branch_inverse(const ConvexFlux& h, Branch side, double v, double tol) {
  const double hmin = h.min_value();
  if (v < hmin - tol) {
    throw Error(ErrorKind::BelowMinimum, "flux '" + h.label() + "': value " + fmt(v) +
                                             " below minimum " + fmt(hmin));
  }
  if (v <= hmin) return h.theta();
  const Interval b = h.bracket();
  if (side == Branch::increasing) {
    if (h(b.hi) < v) {
      throw Error(ErrorKind::BracketExceeded,
                  "flux '" + h.label() + "': increasing inverse of " + fmt(v) + " exits bracket");
    }
    return bisect_increasing([&](double u) { return h(u); }, v, h.theta(), b.hi);
  }
  if (h(b.lo) < v) {
    throw Error(ErrorKind::BracketExceeded,
                "flux '" + h.label() + "': decreasing inverse of " + fmt(v) + " exits bracket");
  }
  // h is decreasing on [lo, theta]; bisect on -h.
  return bisect_increasing([&](double u) { return -h(u); }, -v, b.lo, h.theta());
}

double deriv_inverse(const ConvexFlux& h, double p) {
  const Interval b = h.bracket();
  const double dlo = h.deriv(b.lo);
  const double dhi = h.deriv(b.hi);
  if (p < dlo || p > dhi) {
    throw Error(ErrorKind::OutOfRange, "flux '" + h.label() + "': slope " + fmt(p) +
                                           " outside derivative range [" + fmt(dlo) + ", " +
                                           fmt(dhi) + "]");
  }
  return bisect_increasing([&](double u) { return h.deriv(u); }, p, b.lo, b.hi);
}

double legendre(const ConvexFlux& h, double p) { return legendre_at(h, p, deriv_inverse(h, p)); }

FluxCheck check_flux(const ConvexFlux& h, double tol) {
  FluxCheck out;
  const Interval b = h.bracket();

  // Strict convexity: h' strictly increasing on a dense grid plus the chord
  // test on a coarser one.
  constexpr int kDense = 4001;
  std::vector<double> us(kDense), d2(kDense);
  bool increasing = true;
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kDense; ++i) {
    us[i] = b.lo + b.width() * i / (kDense - 1);
    const double d = h.deriv(us[i]);
    if (!(d > prev)) increasing = false;
    prev = d;
    d2[i] = h.deriv2(us[i]);
  }
  bool chord = true;
  constexpr int kCoarse = 101;
  for (int i = 1; i + 1 < kCoarse; ++i) {
    const double u1 = b.lo + b.width() * (i - 1) / (kCoarse - 1);
    const double u2 = b.lo + b.width() * i / (kCoarse - 1);
    const double u3 = b.lo + b.width() * (i + 1) / (kCoarse - 1);
    if (!(h(u2) < 0.5 * (h(u1) + h(u3)))) chord = false;
  }
  out.strictly_convex = increasing && chord;

  // Superlinearity proxy: h(u)/|u| keeps growing as the bracket is widened.
  const double c = 0.5 * (b.lo + b.hi);
  const double half = 0.5 * b.width() + std::abs(c);
  double last_ratio = -std::numeric_limits<double>::infinity();
  out.superlinear = true;
  for (double k : {1.0, 2.0, 4.0, 8.0}) {
    const double r = std::min(h(k * half) / (k * half), h(-k * half) / (k * half));
    if (!(r > last_ratio)) out.superlinear = false;
    last_ratio = r;
  }

  // Refine every sampled local minimum of h'' so a zero between samples is
  // not mistaken for a small positive bound.
  double min_d2 = *std::min_element(d2.begin(), d2.end());
  for (int i = 0; i < kDense; ++i) {
    const bool local_min = (i == 0 || d2[i] <= d2[i - 1]) && (i + 1 == kDense || d2[i] <= d2[i + 1]);
    if (!local_min) continue;
    const double a = us[std::max(0, i - 1)];
    const double z = us[std::min(kDense - 1, i + 1)];
    const double p = golden_min([&](double u) { return h.deriv2(u); }, a, z);
    min_d2 = std::min(min_d2, h.deriv2(p));
    if (h.deriv2(p) > tol) continue;
    if (!out.degenerate_points.empty() && std::abs(out.degenerate_points.back() - p) < 1e-6) continue;
    out.degenerate_points.push_back(p);
  }
  if (min_d2 > tol) {
    out.alpha = min_d2;
    out.degeneracy_ok = true;
    return out;
  }
  out.degeneracy_ok = true;
  for (double p : out.degenerate_points) {
    if (std::abs(h.deriv(p)) > 1e-8) out.degeneracy_ok = false;
  }
  return out;
}

HypothesisReport validate_hypotheses(const ConvexFlux& f, const ConvexFlux& g) {
  HypothesisReport r;
  r.f = check_flux(f);
  r.g = check_flux(g);
  r.h1_ok = r.f.strictly_convex && r.f.superlinear && r.g.strictly_convex && r.g.superlinear;
  r.h2_ok = r.f.alpha.has_value() || r.f.degeneracy_ok;
  r.h3_ok = r.g.alpha.has_value() || r.g.degeneracy_ok;
  if (r.f.alpha && r.g.alpha) r.uniform_convexity_alpha = std::min(*r.f.alpha, *r.g.alpha);
  return r;
}

ConnectionCheck validate_connection(const ConvexFlux& f, const ConvexFlux& g, const Connection& conn,
                                    double tol) {
  ConnectionCheck c;
  c.valid = std::abs(g(conn.A) - f(conn.B)) <= tol && g.deriv(conn.A) <= tol && f.deriv(conn.B) >= -tol;
  c.critical_left = std::abs(conn.A - g.theta()) <= tol;
  c.critical_right = std::abs(conn.B - f.theta()) <= tol;
  c.critical = c.critical_left || c.critical_right;
  return c;
}

Connection connection_from_left(const ConvexFlux& f, const ConvexFlux& g, double A) {
  if (g.deriv(A) > kConnectionTol) {
    throw Error(ErrorKind::InvalidConnection, "connection: g'(A) > 0 for A = " + fmt(A));
  }
  const double gA = g(A);
  if (gA < f.min_value() - kConnectionTol) {
    throw Error(ErrorKind::InvalidConnection, "connection: g(A) below min f for A = " + fmt(A));
  }
  return {A, branch_inverse(f, Branch::increasing, gA, kConnectionTol)};
}

Connection connection_from_right(const ConvexFlux& f, const ConvexFlux& g, double B) {
  if (f.deriv(B) < -kConnectionTol) {
    throw Error(ErrorKind::InvalidConnection, "connection: f'(B) < 0 for B = " + fmt(B));
  }
  const double fB = f(B);
  if (fB < g.min_value() - kConnectionTol) {
    throw Error(ErrorKind::InvalidConnection, "connection: f(B) below min g for B = " + fmt(B));
  }
  return {branch_inverse(g, Branch::decreasing, fB, kConnectionTol), B};
}

ConvexFlux make_polynomial_flux(std::vector<double> coeffs, Interval bracket, std::string label) {
  if (coeffs.size() < 3) {
    throw Error(ErrorKind::InvalidFlux, "polynomial flux needs degree >= 2");
  }
  auto c0 = std::make_shared<const std::vector<double>>(coeffs);
  auto horner = [](const std::vector<double>& c, double u) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
    return acc;
  };
  std::vector<double> d1, d2;
  for (std::size_t k = 1; k < coeffs.size(); ++k) d1.push_back(static_cast<double>(k) * coeffs[k]);
  for (std::size_t k = 1; k < d1.size(); ++k) d2.push_back(static_cast<double>(k) * d1[k]);
  auto c1 = std::make_shared<const std::vector<double>>(std::move(d1));
  auto c2 = std::make_shared<const std::vector<double>>(std::move(d2));
  ConvexFlux flux(std::move(label), [c0, horner](double u) { return horner(*c0, u); },
                  [c1, horner](double u) { return horner(*c1, u); },
                  [c2, horner](double u) { return horner(*c2, u); }, bracket);
  if (!check_flux(flux).strictly_convex) {
    throw Error(ErrorKind::InvalidFlux, "polynomial flux is not strictly convex on its bracket");
  }
  flux.set_coefficients(std::move(coeffs));
  return flux;
}

std::vector<std::string> flux_keys() {
  return {"burgers", "square", "shifted", "quartic", "sextic_plus1", "polynomial"};
}

Interval default_bracket(std::string_view key) {
  if (key == "burgers" || key == "square") return {-4.0, 4.0};
  if (key == "shifted") return {-3.0, 5.0};
  if (key == "quartic") return {-2.0, 2.0};
  if (key == "sextic_plus1") return {-1.6, 1.6};
  return {-4.0, 4.0};
}

ConvexFlux make_flux(std::string_view key, Interval bracket, std::span<const double> coeffs) {
  std::vector<double> c;
  if (key == "burgers") {
    c = {0.0, 0.0, 0.5};
  } else if (key == "square") {
    c = {0.0, 0.0, 1.0};
  } else if (key == "shifted") {
    c = {0.0, -2.0, 1.0};  // (u-1)^2 - 1
  } else if (key == "quartic") {
    c = {0.0, 0.0, 0.0, 0.0, 1.0};
  } else if (key == "sextic_plus1") {
    c = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0};
  } else if (key == "polynomial") {
    c.assign(coeffs.begin(), coeffs.end());
  } else {
    throw Error(ErrorKind::InvalidFlux, "unknown flux key '" + std::string(key) + "'");
  }
  return make_polynomial_flux(std::move(c), bracket, std::string(key));
}

}  // namespace discflux
