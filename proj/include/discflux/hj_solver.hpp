#pragma once

#include <iosfwd>
#include <vector>

#include "discflux/flux.hpp"
#include "discflux/interface_state.hpp"
#include "discflux/paths.hpp"

namespace discflux {

enum class FootType { data, interface };

/// Characteristic foot: a point y on the initial line or a departure time tau
/// on the interface.
struct Foot {
  FootType type = FootType::data;
  double value = 0.0;
};

struct ValueSample {
  double x;
  double t;
  double v;
  ControlCurve optimizer;
};

struct PointSolution {
  double x = 0.0;
  double t = 0.0;
  double v = 0.0;
  double u = 0.0;
  Foot foot;
  ControlCurve curve;
};

struct GridSpec {
  Interval domain{-1.0, 1.0};
  int n = 400;
  double cluster_ratio = 1.1;
  double min_spacing_fraction = 1e-4;  // of the domain width
};

/// Uniform cell centers plus geometric clustering toward 0 on both sides.
/// Never contains 0.
std::vector<double> make_grid(const GridSpec& spec);

struct SolutionField {
  double t = 0.0;
  std::vector<double> xs;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<Foot> feet;
  double R = 0.0;
  double L = 0.0;
};

struct Fronts {
  double R;
  double L;
};

struct Traces {
  double u0plus;
  double u0minus;
};

/// Explicit-formula solver. The optimal curve ending at (x, t) is either a
/// direct segment from the data or leaves the interface at some tau; the
/// interface value comes from the precomputed profile.
class HJSolver {
 public:
  HJSolver(ConvexFlux f, ConvexFlux g, Connection conn, InitialProfile data, InterfaceProfile profile);

  PointSolution solve_point(double x, double t) const;
  ValueSample value_at(double x, double t) const;
  SolutionField solve_field(double t, const std::vector<double>& xs) const;
  Fronts fronts(double t, const SolutionField& field) const;
  Traces interface_traces(double t) const;

  /// u at an interface-fed point computed from fresh b' data at tau: the
  /// max(-b', connection flux) formula, or the data-state form for critical
  /// connections. Independent of the tau optimization.
  double chain_u(double x, double tau) const;

  const InterfaceProfile& profile() const { return profile_; }
  const ConvexFlux& f() const { return f_; }
  const ConvexFlux& g() const { return g_; }
  const Connection& connection() const { return conn_; }
  const InitialProfile& data() const { return data_; }
  bool critical_left() const { return crit_left_; }
  bool critical_right() const { return crit_right_; }

 private:
  struct Piece {
    double c = 0.0;      // mean interface flux on the piece
    bool has_star = false;
    double pstar = 0.0;  // |h'(q*)| with h(q*) = c on the outgoing branch
    double hstar = 0.0;  // h*(+-pstar)
  };
  struct InterfaceCandidate {
    bool found = false;
    double cost = 0.0;
    double tau = 0.0;
    std::size_t piece = 0;
  };

  InterfaceCandidate search_interface(double x, double t) const;
  double refine_tau(double x, double t, const InterfaceCandidate& c) const;
  const ConvexFlux& flux_for(Side s) const { return s == Side::positive ? f_ : g_; }

  ConvexFlux f_;
  ConvexFlux g_;
  Connection conn_;
  InitialProfile data_;
  InterfaceProfile profile_;
  bool crit_left_ = false;
  bool crit_right_ = false;
  std::vector<Piece> pieces_plus_;
  std::vector<Piece> pieces_minus_;
};

struct MonotonicityReport {
  double y_plus = 0.0;   // worst decrease of y_+ on [R, inf)
  double t_plus = 0.0;   // worst increase of t_+ on [0, R)
  double t_minus = 0.0;  // worst decrease of t_- on (L, 0]
  double y_minus = 0.0;  // worst decrease of y_- on (-inf, L]
  double worst() const;
};

MonotonicityReport check_monotonicity(const SolutionField& field);

/// CSV: x,u,foot_type,foot_value
void write_field_csv(std::ostream& os, const SolutionField& field);
/// JSON sidecar with t, R, L and the interface traces.
void write_fronts_json(std::ostream& os, const SolutionField& field, const Traces& traces);

}  // namespace discflux
