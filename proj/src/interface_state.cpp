#include "discflux/interface_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "discflux/error.hpp"
#include "discflux/parallel.hpp"

namespace discflux {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double interp(const std::vector<double>& ts, const std::vector<double>& ys, double t) {
  if (t <= ts.front()) return ys.front();
  if (t >= ts.back()) return ys.back();
  const std::size_t k = std::upper_bound(ts.begin(), ts.end(), t) - ts.begin();
  const double w = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
  return ys[k - 1] + w * (ys[k] - ys[k - 1]);
}

}  // namespace

BValue compute_b(double t, const InitialProfile& data, const ConvexFlux& h, Side side) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidConfig, "compute_b needs t > 0");
  const DirectOptimum opt = minimize_direct(0.0, t, data, h, side);
  return {opt.value, opt.y, opt.y == 0.0 ? 1.0 : 0.0, opt.u};
}

double compute_bprime(double t, const ConvexFlux& h, double y_foot) {
  if (y_foot == 0.0) return -h.min_value();
  return -h(deriv_inverse(h, -y_foot / t));
}

LambdaPair compute_lambda(double bprime_plus, double bprime_minus, const ConvexFlux& f, const ConvexFlux& g,
                          const Connection& conn) {
  const double mp = -bprime_plus;
  const double mm = -bprime_minus;
  const double fB = f(conn.B);
  const double gA = g(conn.A);
  LambdaPair out{};
  if (mp > std::max(mm, fB)) {
    out.plus = branch_inverse(f, Branch::decreasing, mp, 1e-9);
  } else {
    out.plus = branch_inverse(f, Branch::increasing, std::max(mm, fB), 1e-9);
  }
  if (mm >= std::max(mp, gA)) {
    out.minus = branch_inverse(g, Branch::increasing, mm, 1e-9);
  } else {
    out.minus = branch_inverse(g, Branch::decreasing, std::max(mp, gA), 1e-9);
  }
  return out;
}

InterfaceNode evaluate_interface(double t, const InitialProfile& data, const ConvexFlux& f, const ConvexFlux& g,
                                 const Connection& conn) {
  InterfaceNode n;
  n.t = t;
  if (t > 0.0) {
    const BValue bp = compute_b(t, data, f, Side::positive);
    const BValue bm = compute_b(t, data, g, Side::negative);
    n.b_plus = bp.value;
    n.b_minus = bm.value;
    n.y_plus = bp.y_foot;
    n.y_minus = bm.y_foot;
    n.bprime_plus = compute_bprime(t, f, bp.y_foot);
    n.bprime_minus = compute_bprime(t, g, bm.y_foot);
    n.u_right = bp.y_foot == 0.0 ? f.theta() : bp.u;
    n.u_left = bm.y_foot == 0.0 ? g.theta() : bm.u;
  } else {
    // One-sided limits as t -> 0+.
    n.u_right = std::min(data.u0(0.0), f.theta());
    n.u_left = std::max(data.u0_left(0.0), g.theta());
    n.bprime_plus = -f(n.u_right);
    n.bprime_minus = -g(n.u_left);
  }
  const LambdaPair lam = compute_lambda(n.bprime_plus, n.bprime_minus, f, g, conn);
  n.lambda_plus = lam.plus;
  n.lambda_minus = lam.minus;
  n.flux = f(lam.plus);
  n.regime = n.flux > f(conn.B) ? (lam.plus < f.theta() ? InterfaceRegime::right_data : InterfaceRegime::left_data)
                                : InterfaceRegime::connection;
  return n;
}

InterfaceNode resolve_history(InterfaceNode n, double running_key, const ConvexFlux& f, const ConvexFlux& g,
                              const Connection& conn) {
  const double c = g(conn.A);
  if (!(n.t > 0.0)) {
    n.value = 0.0;
    return n;
  }
  const double m = std::min(n.b_plus, n.b_minus);
  const double key = m + c * n.t;
  const double tol = 1e-12 * std::max(1.0, std::abs(key));
  n.value = std::min(key, running_key) - c * n.t;
  n.regime = InterfaceRegime::connection;
  if (key <= running_key + tol) {
    const bool right = n.b_plus <= m + tol;
    const bool left = n.b_minus <= m + tol;
    const double dr = right ? -n.bprime_plus : -kInf;
    const double dl = left ? -n.bprime_minus : -kInf;
    if (dr > std::max(dl, c)) {
      n.regime = InterfaceRegime::right_data;
    } else if (dl >= std::max(dr, c) && dl > -kInf) {
      n.regime = InterfaceRegime::left_data;
    }
  }
  switch (n.regime) {
    case InterfaceRegime::right_data:
      n.flux = -n.bprime_plus;
      n.lambda_plus = branch_inverse(f, Branch::decreasing, n.flux, 1e-9);
      n.lambda_minus = branch_inverse(g, Branch::decreasing, n.flux, 1e-9);
      break;
    case InterfaceRegime::left_data:
      n.flux = -n.bprime_minus;
      n.lambda_plus = branch_inverse(f, Branch::increasing, n.flux, 1e-9);
      n.lambda_minus = branch_inverse(g, Branch::increasing, n.flux, 1e-9);
      break;
    case InterfaceRegime::connection:
      n.flux = c;
      n.lambda_plus = conn.B;
      n.lambda_minus = conn.A;
      break;
  }
  return n;
}

double InterfaceProfile::lambda_plus_at(double t) const { return interp(times, lambda_plus, t); }
double InterfaceProfile::lambda_minus_at(double t) const { return interp(times, lambda_minus, t); }
double InterfaceProfile::value_at(double t) const { return interp(times, interface_value, t); }

double InterfaceProfile::rh_residual(const ConvexFlux& f, const ConvexFlux& g) const {
  double r = 0.0;
  for (std::size_t i = 0; i < size(); ++i) r = std::max(r, std::abs(f(lambda_plus[i]) - g(lambda_minus[i])));
  return r;
}

double InterfaceProfile::foot_monotonicity_violation() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < size(); ++i) {
    worst = std::max(worst, y_plus_t[i - 1] - y_plus_t[i]);
    worst = std::max(worst, y_minus_t[i] - y_minus_t[i - 1]);
  }
  return worst;
}

InterfaceProfile build_profile(const InitialProfile& data, const ConvexFlux& f, const ConvexFlux& g,
                               const Connection& conn, double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw Error(ErrorKind::InvalidConfig, "build_profile needs T > 0 and dt > 0");
  const std::size_t steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  const std::size_t n = steps + 1;
  std::vector<InterfaceNode> nodes(n);
  parallel_for(n, [&](std::size_t i) {
    const double t = i == steps ? T : T * static_cast<double>(i) / static_cast<double>(steps);
    nodes[i] = evaluate_interface(t, data, f, g, conn);
  });

  InterfaceProfile p;
  p.connection = conn;
  p.critical = validate_connection(f, g, conn).critical;
  p.dt = T / static_cast<double>(steps);
  for (const auto& nd : nodes) {
    p.times.push_back(nd.t);
    p.b_plus.push_back(nd.b_plus);
    p.b_minus.push_back(nd.b_minus);
    p.bprime_plus.push_back(nd.bprime_plus);
    p.bprime_minus.push_back(nd.bprime_minus);
    p.y_plus_t.push_back(nd.y_plus);
    p.y_minus_t.push_back(nd.y_minus);
    p.u_right.push_back(nd.u_right);
    p.u_left.push_back(nd.u_left);
  }
  // The history recursion is sequential but cheap.
  const double c = g(conn.A);
  double running = kInf;
  for (auto& nd : nodes) {
    nd = resolve_history(nd, running, f, g, conn);
    running = std::min(running, nd.value + c * nd.t);
  }
  for (const auto& nd : nodes) {
    p.lambda_plus.push_back(nd.lambda_plus);
    p.lambda_minus.push_back(nd.lambda_minus);
    p.flux.push_back(nd.flux);
    p.interface_value.push_back(nd.value);
    p.regime.push_back(nd.regime);
  }
  return p;
}

InterfaceNode evaluate_interface_at(const InterfaceProfile& p, double t, const InitialProfile& data,
                                    const ConvexFlux& f, const ConvexFlux& g) {
  const InterfaceNode raw = evaluate_interface(t, data, f, g, p.connection);
  if (!(t > 0.0)) return resolve_history(raw, kInf, f, g, p.connection);
  const std::size_t k = std::upper_bound(p.times.begin(), p.times.end(), t) - p.times.begin();
  double running = kInf;
  const double c = g(p.connection.A);
  if (k > 0) running = p.interface_value[k - 1] + c * p.times[k - 1];
  // The node at t itself, if present, is already included.
  return resolve_history(raw, running, f, g, p.connection);
}

void write_profile_csv(std::ostream& os, const InterfaceProfile& p) {
  const auto old = os.precision(17);
  os << "t,b_plus,b_minus,bprime_plus,bprime_minus,lambda_plus,lambda_minus,y_plus,y_minus\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    os << p.times[i] << ',' << p.b_plus[i] << ',' << p.b_minus[i] << ',' << p.bprime_plus[i] << ','
       << p.bprime_minus[i] << ',' << p.lambda_plus[i] << ',' << p.lambda_minus[i] << ',' << p.y_plus_t[i] << ','
       << p.y_minus_t[i] << '\n';
  }
  os.precision(old);
}

}  // namespace discflux
