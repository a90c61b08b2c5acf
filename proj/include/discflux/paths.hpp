#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "discflux/flux.hpp"

namespace discflux {

enum class Side { positive, negative };

inline double side_sign(Side s) { return s == Side::positive ? 1.0 : -1.0; }

/// Piecewise-linear path ending at (x, t): (y, 0) -> (0, t2) -> (0, t1) -> (x, t).
///
/// t2 == t1 == 0 is the direct one-piece curve from (y, 0). t2 == 0 < t1
/// requires y == 0 (the curve starts on the interface).
struct ControlCurve {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double t2 = 0.0;
  double t1 = 0.0;
  Side side = Side::positive;

  bool direct() const { return t1 == 0.0; }

  struct Vertex {
    double time;
    double pos;
  };
  /// Vertices in time order with zero-duration segments removed.
  std::vector<Vertex> vertices() const;
  int pieces() const { return static_cast<int>(vertices().size()) - 1; }
  double position(double s) const;
};

ControlCurve make_curve(double t, double x, double y, double t2, double t1, Side side);

/// Piecewise-constant initial data: values[k] holds on [breaks[k-1], breaks[k]).
struct PiecewiseConstant {
  std::vector<double> breaks;
  std::vector<double> values;  // breaks.size() + 1 entries
};

/// Initial data u0 together with its primitive v0 (v0(0) = 0).
///
/// Piecewise-constant data keep an exact piecewise-linear primitive. General
/// data are integrated by adaptive Simpson onto a lookup grid and the primitive
/// is linearly interpolated between nodes.
class InitialProfile {
 public:
  static InitialProfile piecewise_constant(std::vector<double> breaks, std::vector<double> values,
                                           std::string label = "piecewise");
  static InitialProfile from_function(std::function<double(double)> u0, Interval table_domain,
                                      std::string label = "function", int cells = 1 << 15);
  /// Nodal samples become cells split at the midpoints between nodes.
  static InitialProfile sampled(const std::vector<double>& xs, const std::vector<double>& us,
                                std::string label = "sampled");

  double u0(double x) const;
  /// Left limit u0(x-); equals u0(x) for general data.
  double u0_left(double x) const;
  double v0(double x) const;

  bool is_piecewise() const { return piecewise_.has_value(); }
  const PiecewiseConstant& pieces() const { return *piecewise_; }

  /// Range of u0 values (sampled on the lookup table for general data).
  Interval value_range() const { return range_; }
  double sup_norm() const;

  /// Radius M with Supp u0 inside [-M, M], when known.
  std::optional<double> support() const { return support_; }
  void set_support(double M) { support_ = M; }

  const std::string& label() const { return label_; }

 private:
  std::string label_;
  std::optional<PiecewiseConstant> piecewise_;
  std::vector<double> break_v0_;  // v0 at each break for piecewise data

  std::function<double(double)> fn_;
  Interval table_domain_{};
  std::vector<double> table_x_;
  std::vector<double> table_v0_;

  Interval range_{};
  std::optional<double> support_;
};

/// J(gamma, v0, h): v0(gamma(0)) plus the integral of h*(gamma') along gamma.
double cost_J(const ControlCurve& curve, const InitialProfile& data, const ConvexFlux& h);

/// J_+ / J_-: the h* integral restricted to times where gamma is strictly on `side`.
double cost_Jpm(const ControlCurve& curve, const InitialProfile& data, const ConvexFlux& h, Side side);

struct DirectOptimum {
  double value;
  double y;  // extreme minimizing foot: smallest for Side::positive, largest for Side::negative
  double u;  // characteristic state (h')^{-1}((x - y)/t)
};

/// Minimizes v0(y) + t h*((x - y)/t) over feet y on `side` of the interface
/// (y >= 0 or y <= 0). Throws SlopeOutOfRange when no foot is admissible.
DirectOptimum minimize_direct(double x, double t, const InitialProfile& data, const ConvexFlux& h,
                              Side side);

}  // namespace discflux
