#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace discflux {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

enum class Branch { increasing, decreasing };

/// A C^2 strictly convex flux with analytic first and second derivatives.
///
/// The bracket must contain the minimizer and every state that arises in a
/// run; all inversions are bracketed bisections restricted to it. The
/// minimizer is located once at construction.
class ConvexFlux {
 public:
  using Fn = std::function<double(double)>;

  ConvexFlux(std::string label, Fn eval, Fn deriv, Fn deriv2, Interval bracket);

  double operator()(double u) const { return eval_(u); }
  double eval(double u) const { return eval_(u); }
  double deriv(double u) const { return deriv_(u); }
  double deriv2(double u) const { return deriv2_(u); }

  const Interval& bracket() const { return bracket_; }
  const std::string& label() const { return label_; }

  double theta() const { return theta_; }
  double min_value() const { return min_value_; }

  /// Range of h' over the bracket.
  Interval slope_range() const { return {deriv_(bracket_.lo), deriv_(bracket_.hi)}; }

  /// Coefficients when built from the polynomial registry, lowest order first.
  const std::vector<double>& coefficients() const { return coeffs_; }
  void set_coefficients(std::vector<double> c) { coeffs_ = std::move(c); }

 private:
  std::string label_;
  Fn eval_;
  Fn deriv_;
  Fn deriv2_;
  Interval bracket_;
  double theta_ = 0.0;
  double min_value_ = 0.0;
  std::vector<double> coeffs_;
};

struct FluxMinimizer {
  double theta;
  double min_value;
};

/// Bisection on h' over the bracket. Throws NoSignChange.
FluxMinimizer find_minimizer(const ConvexFlux& h);

/// Inverse of h restricted to one monotone branch. Values within `tol` below
/// the minimum are clamped to it.
double branch_inverse(const ConvexFlux& h, Branch side, double v, double tol = 1e-12);

/// (h')^{-1}(p), by bisection so it stays exact at degenerate points.
double deriv_inverse(const ConvexFlux& h, double p);

/// Legendre conjugate h*(p) = sup_q {p q - h(q)}.
double legendre(const ConvexFlux& h, double p);

/// h*(p) given the already known maximizer q = (h')^{-1}(p).
inline double legendre_at(const ConvexFlux& h, double p, double q) { return p * q - h(q); }

struct FluxCheck {
  bool strictly_convex = false;
  bool superlinear = false;
  std::optional<double> alpha;           // min sampled h'' when positive
  std::vector<double> degenerate_points;  // where h'' vanishes
  bool degeneracy_ok = false;            // h' vanishes at every degenerate point
};

struct HypothesisReport {
  bool h1_ok = false;
  bool h2_ok = false;
  bool h3_ok = false;
  std::optional<double> uniform_convexity_alpha;  // common bound for f and g
  FluxCheck f;
  FluxCheck g;
};

FluxCheck check_flux(const ConvexFlux& h, double tol = 1e-9);
HypothesisReport validate_hypotheses(const ConvexFlux& f, const ConvexFlux& g);

struct Connection {
  double A = 0.0;
  double B = 0.0;
};

inline constexpr double kConnectionTol = 1e-9;

struct ConnectionCheck {
  bool valid = false;
  bool critical = false;
  bool critical_left = false;   // A == theta_g
  bool critical_right = false;  // B == theta_f
};

ConnectionCheck validate_connection(const ConvexFlux& f, const ConvexFlux& g, const Connection& conn,
                                    double tol = kConnectionTol);

/// Completes a connection from A: B = f_+^{-1}(g(A)).
Connection connection_from_left(const ConvexFlux& f, const ConvexFlux& g, double A);
/// Completes a connection from B: A = g_-^{-1}(f(B)).
Connection connection_from_right(const ConvexFlux& f, const ConvexFlux& g, double B);

/// Built-in registry: "burgers", "square", "shifted", "quartic",
/// "sextic_plus1" and "polynomial" (needs coefficients, lowest order first).
ConvexFlux make_flux(std::string_view key, Interval bracket, std::span<const double> coeffs = {});
ConvexFlux make_polynomial_flux(std::vector<double> coeffs, Interval bracket, std::string label = "polynomial");
std::vector<std::string> flux_keys();
Interval default_bracket(std::string_view key);

}  // namespace discflux
