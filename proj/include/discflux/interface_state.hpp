#pragma once

#include <iosfwd>
#include <vector>

#include "discflux/flux.hpp"
#include "discflux/paths.hpp"

namespace discflux {

struct BValue {
  double value;
  double y_foot;         // extreme optimal foot
  double rest_fraction;  // share of [0, t] spent resting on the interface
  double u;              // characteristic state leaving the foot
};

/// b_+(t) (side positive, h = f) or b_-(t) (side negative, h = g): the optimal
/// cost of reaching (0, t) from the data on one side.
///
/// A curve that reaches the interface early and rests there never beats the
/// direct segment from the same foot, so the optimum is a direct segment and
/// the resting fraction is 1 exactly when the optimal foot is 0.
BValue compute_b(double t, const InitialProfile& data, const ConvexFlux& h, Side side);

/// b'(t) = -h((h')^{-1}(-y/t)), or -h(theta) when y == 0.
double compute_bprime(double t, const ConvexFlux& h, double y_foot);

struct LambdaPair {
  double plus;
  double minus;
};

/// Interface boundary data from b'_+ and b'_-.
LambdaPair compute_lambda(double bprime_plus, double bprime_minus, const ConvexFlux& f, const ConvexFlux& g,
                          const Connection& conn);

/// Which term realizes v(0, t): the right data, the left data, or a stay on
/// the interface at the connection flux.
enum class InterfaceRegime { right_data, left_data, connection };

/// Everything the interface needs at one time.
struct InterfaceNode {
  double t = 0.0;
  double b_plus = 0.0;
  double b_minus = 0.0;
  double bprime_plus = 0.0;
  double bprime_minus = 0.0;
  double y_plus = 0.0;
  double y_minus = 0.0;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  double u_right = 0.0;  // state arriving at 0+ from the right data
  double u_left = 0.0;   // state arriving at 0- from the left data
  double flux = 0.0;     // f(lambda_plus), the interface flux
  double value = 0.0;    // v(0, t)
  InterfaceRegime regime = InterfaceRegime::connection;
};

/// Evaluates one node from b'_+ and b'_- alone, ignoring earlier times. At
/// t = 0 the one-sided limits of b' are used.
InterfaceNode evaluate_interface(double t, const InitialProfile& data, const ConvexFlux& f, const ConvexFlux& g,
                                 const Connection& conn);

/// v(0, t) = min over s <= t of [min(b_+, b_-)(s) - (t - s) c] with c = g(A).
/// `running_key` is the minimum of min(b_+, b_-)(s) + c s over earlier s
/// (+inf when there is none). Sets value, regime, the traces and the flux.
InterfaceNode resolve_history(InterfaceNode raw, double running_key, const ConvexFlux& f, const ConvexFlux& g,
                              const Connection& conn);

/// Time-gridded interface state on [0, T].
struct InterfaceProfile {
  std::vector<double> times;
  std::vector<double> b_plus, b_minus;
  std::vector<double> bprime_plus, bprime_minus;
  std::vector<double> y_plus_t, y_minus_t;
  std::vector<double> lambda_plus, lambda_minus;
  std::vector<double> u_right, u_left;
  std::vector<double> flux;             // f(lambda_plus) per node
  std::vector<double> interface_value;  // v(0, t)
  std::vector<InterfaceRegime> regime;
  Connection connection;
  bool critical = false;
  double dt = 0.0;

  std::size_t size() const { return times.size(); }
  double horizon() const { return times.back(); }

  /// Linear interpolation in t (clamped to [0, T]).
  double lambda_plus_at(double t) const;
  double lambda_minus_at(double t) const;
  double value_at(double t) const;

  /// Largest |f(lambda_+) - g(lambda_-)| over nodes.
  double rh_residual(const ConvexFlux& f, const ConvexFlux& g) const;
  /// Largest backward step of y_+ and forward step of y_- over the grid.
  double foot_monotonicity_violation() const;
};

/// Builds the profile on a uniform grid with step at most dt.
InterfaceProfile build_profile(const InitialProfile& data, const ConvexFlux& f, const ConvexFlux& g,
                               const Connection& conn, double T, double dt);

/// Node at an arbitrary t <= T: fresh b values, history from the profile grid.
InterfaceNode evaluate_interface_at(const InterfaceProfile& p, double t, const InitialProfile& data,
                                    const ConvexFlux& f, const ConvexFlux& g);

/// CSV: t,b_plus,b_minus,bprime_plus,bprime_minus,lambda_plus,lambda_minus,y_plus,y_minus
void write_profile_csv(std::ostream& os, const InterfaceProfile& p);

}  // namespace discflux
