#include "discflux/hj_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include "discflux/error.hpp"
#include "discflux/parallel.hpp"

namespace discflux {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinTauFraction = 1e-6;
constexpr double kInterfaceMargin = 1e-12;

}  // namespace

std::vector<double> make_grid(const GridSpec& spec) {
  if (spec.n < 2 || !(spec.domain.lo < spec.domain.hi)) {
    throw Error(ErrorKind::InvalidConfig, "grid needs n >= 2 and a non-empty domain");
  }
  const double lo = spec.domain.lo;
  const double hi = spec.domain.hi;
  const double dx = (hi - lo) / spec.n;
  std::vector<double> xs;
  for (int i = 0; i < spec.n; ++i) {
    const double x = lo + (i + 0.5) * dx;
    if (x != 0.0) xs.push_back(x);
  }
  if (lo < 0.0 && hi > 0.0 && spec.cluster_ratio > 1.0) {
    const double first_pos = *std::upper_bound(xs.begin(), xs.end(), 0.0);
    const double first_neg = *(std::lower_bound(xs.begin(), xs.end(), 0.0) - 1);
    const double d0 = spec.min_spacing_fraction * (hi - lo);
    for (double d = d0; d < 0.999 * first_pos; d *= spec.cluster_ratio) xs.push_back(d);
    for (double d = d0; d < 0.999 * -first_neg; d *= spec.cluster_ratio) xs.push_back(-d);
    std::sort(xs.begin(), xs.end());
  }
  return xs;
}

HJSolver::HJSolver(ConvexFlux f, ConvexFlux g, Connection conn, InitialProfile data, InterfaceProfile profile)
    : f_(std::move(f)), g_(std::move(g)), conn_(conn), data_(std::move(data)), profile_(std::move(profile)) {
  const ConnectionCheck cc = validate_connection(f_, g_, conn_);
  if (!cc.valid) throw Error(ErrorKind::InvalidConnection, "solver: invalid (A,B) connection");
  crit_left_ = cc.critical_left;
  crit_right_ = cc.critical_right;

  const std::size_t n = profile_.size();
  for (Side s : {Side::positive, Side::negative}) {
    const ConvexFlux& h = flux_for(s);
    auto& pieces = s == Side::positive ? pieces_plus_ : pieces_minus_;
    pieces.resize(n > 0 ? n - 1 : 0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      Piece& pc = pieces[k];
      pc.c = (profile_.interface_value[k] - profile_.interface_value[k + 1]) /
             (profile_.times[k + 1] - profile_.times[k]);
      if (!(pc.c > h.min_value())) continue;
      pc.has_star = true;
      try {
        const double q = branch_inverse(h, s == Side::positive ? Branch::increasing : Branch::decreasing, pc.c);
        const double p = h.deriv(q);
        pc.pstar = std::abs(p);
        pc.hstar = legendre_at(h, p, q);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::BracketExceeded) throw;
        pc.pstar = kInf;  // stationary slope beyond the bracket
      }
    }
  }
}

HJSolver::InterfaceCandidate HJSolver::search_interface(double x, double t) const {
  InterfaceCandidate best;
  const Side side = x > 0.0 ? Side::positive : Side::negative;
  const double s = side_sign(side);
  const ConvexFlux& h = flux_for(side);
  const double a = std::abs(x);
  const double pmax = side == Side::positive ? h.deriv(h.bracket().hi) : -h.deriv(h.bracket().lo);
  if (!(pmax > 0.0)) return best;
  const double tau_max = std::min(t, t - a / pmax);
  if (tau_max < 0.0) return best;

  const auto& pieces = side == Side::positive ? pieces_plus_ : pieces_minus_;
  const auto& ts = profile_.times;
  const auto& V = profile_.interface_value;

  auto offer = [&](double cost, double tau, std::size_t piece) {
    const double tol = 1e-12 * std::max(1.0, std::abs(cost));
    if (!best.found || cost < best.cost - tol ||
        (std::abs(cost - best.cost) <= tol && (side == Side::positive ? tau > best.tau : tau < best.tau))) {
      best = {true, cost, tau, piece};
    }
  };

  std::size_t k = 0;
  for (; k < pieces.size() && ts[k] <= tau_max; ++k) {
    const Piece& pc = pieces[k];
    const double tk = ts[k];
    const double tk1 = std::min(ts[k + 1], tau_max);
    if (pc.has_star && std::isfinite(pc.pstar) && pc.pstar > 0.0) {
      const double tau = t - a / pc.pstar;
      if (tau >= tk && tau <= tk1) offer(V[k] - pc.c * (tau - tk) + (t - tau) * pc.hstar, tau, k);
    }
    // Node t_k is a local minimum when the piecewise derivative changes sign there.
    const double pk = std::min(pmax, a / (t - tk));
    const bool left_ok = k == 0 || (pieces[k - 1].has_star && pk <= pieces[k - 1].pstar);
    const bool right_ok = !pc.has_star || pk >= pc.pstar;
    if (left_ok && right_ok) offer(V[k] + (t - tk) * legendre(h, s * pk), tk, k);
  }
  // Endpoint imposed by the bracket.
  if (tau_max > 0.0 && tau_max < t) {
    const std::size_t kk = k == 0 ? 0 : k - 1;
    if (kk < pieces.size()) {
      const double v_end = V[kk] - pieces[kk].c * (tau_max - ts[kk]);
      offer(v_end + (t - tau_max) * legendre(h, s * pmax), tau_max, kk);
    }
  }
  return best;
}

double HJSolver::refine_tau(double x, double t, const InterfaceCandidate& c) const {
  const Side side = x > 0.0 ? Side::positive : Side::negative;
  const double s = side_sign(side);
  const ConvexFlux& h = flux_for(side);
  const double a = std::abs(x);
  const auto& ts = profile_.times;
  const std::size_t n = ts.size();
  const double pmax = side == Side::positive ? h.deriv(h.bracket().hi) : -h.deriv(h.bracket().lo);
  const double tau_max = std::min(t, t - a / pmax);
  if (c.tau <= 0.0 || c.tau >= tau_max) return c.tau;

  // psi'(tau) = h((h')^{-1}(+-a/(t-tau))) - f(lambda_+(tau)), with lambda
  // evaluated exactly at tau rather than interpolated.
  auto dpsi = [&](double tau) {
    const double q = deriv_inverse(h, s * std::min(pmax, a / (t - tau)));
    return h(q) - evaluate_interface_at(profile_, tau, data_, f_, g_).flux;
  };
  double lo = ts[c.piece > 0 ? c.piece - 1 : 0];
  double hi = std::min(ts[std::min(c.piece + 2, n - 1)], tau_max);
  if (!(lo < c.tau && c.tau < hi)) return c.tau;
  if (!(dpsi(lo) < 0.0) || !(dpsi(hi) > 0.0)) return c.tau;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= 1e-15 * t) break;
    (dpsi(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

PointSolution HJSolver::solve_point(double x, double t) const {
  if (x == 0.0) throw Error(ErrorKind::InvalidConfig, "solve_point needs x != 0");
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidConfig, "solve_point needs t > 0");
  if (t > profile_.horizon() * (1.0 + 1e-12)) {
    throw Error(ErrorKind::InvalidConfig, "interface profile does not cover the requested time");
  }
  const Side side = x > 0.0 ? Side::positive : Side::negative;
  const double s = side_sign(side);
  const ConvexFlux& h = flux_for(side);

  std::optional<DirectOptimum> direct;
  try {
    direct = minimize_direct(x, t, data_, h, side);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SlopeOutOfRange) throw;
  }
  const InterfaceCandidate ic = search_interface(x, t);
  const bool use_interface =
      ic.found && ic.tau >= kMinTauFraction * t && (!direct || ic.cost < direct->value - kInterfaceMargin);

  PointSolution out;
  out.x = x;
  out.t = t;
  if (use_interface) {
    const double tau = refine_tau(x, t, ic);
    const double pmax = side == Side::positive ? h.deriv(h.bracket().hi) : -h.deriv(h.bracket().lo);
    const double p = s * std::min(pmax, std::abs(x) / (t - tau));
    out.u = deriv_inverse(h, p);
    out.v = profile_.value_at(tau) + (t - tau) * legendre_at(h, p, out.u);
    out.foot = {FootType::interface, tau};
    out.curve = make_curve(t, x, 0.0, 0.0, tau, side);
    return out;
  }
  if (!direct) {
    throw Error(ErrorKind::SlopeOutOfRange, "no admissible curve reaches the point; widen the flux bracket");
  }
  out.u = direct->u;
  out.v = direct->value;
  out.foot = {FootType::data, direct->y};
  out.curve = make_curve(t, x, direct->y, 0.0, 0.0, side);
  return out;
}

ValueSample HJSolver::value_at(double x, double t) const {
  const PointSolution p = solve_point(x, t);
  return {x, t, p.v, p.curve};
}

SolutionField HJSolver::solve_field(double t, const std::vector<double>& xs) const {
  SolutionField field;
  field.t = t;
  field.xs = xs;
  field.u.resize(xs.size());
  field.v.resize(xs.size());
  field.feet.resize(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const PointSolution p = solve_point(xs[i], t);
    field.u[i] = p.u;
    field.v[i] = p.v;
    field.feet[i] = p.foot;
  });
  const Fronts fr = fronts(t, field);
  field.R = fr.R;
  field.L = fr.L;
  return field;
}

Fronts HJSolver::fronts(double t, const SolutionField& field) const {
  const auto& xs = field.xs;
  double min_gap = kInf;
  for (std::size_t i = 1; i < xs.size(); ++i) min_gap = std::min(min_gap, xs[i] - xs[i - 1]);
  const double target = 0.5 * min_gap;
  auto is_data = [&](double x) { return solve_point(x, t).foot.type == FootType::data; };

  Fronts out{0.0, 0.0};
  const std::size_t zero = std::lower_bound(xs.begin(), xs.end(), 0.0) - xs.begin();

  // R: smallest x > 0 with a data foot.
  std::size_t j = zero;
  while (j < xs.size() && field.feet[j].type != FootType::data) ++j;
  if (j == xs.size()) {
    out.R = xs.empty() ? 0.0 : std::max(0.0, xs.back());
  } else if (j == zero) {
    out.R = 0.0;
  } else {
    double lo = xs[j - 1], hi = xs[j];
    while (hi - lo > target) {
      const double mid = 0.5 * (lo + hi);
      (is_data(mid) ? hi : lo) = mid;
    }
    out.R = hi;
  }

  // L: largest x < 0 with a data foot.
  if (zero == 0) return out;
  std::size_t i = zero;  // one past the candidate
  while (i > 0 && field.feet[i - 1].type != FootType::data) --i;
  if (i == 0) {
    out.L = std::min(0.0, xs.front());
  } else if (i == zero) {
    out.L = 0.0;
  } else {
    double lo = xs[i - 1], hi = xs[i];
    while (hi - lo > target) {
      const double mid = 0.5 * (lo + hi);
      (is_data(mid) ? lo : hi) = mid;
    }
    out.L = lo;
  }
  return out;
}

Traces HJSolver::interface_traces(double t) const {
  const InterfaceNode n = evaluate_interface_at(profile_, t, data_, f_, g_);
  return {n.lambda_plus, n.lambda_minus};
}

double HJSolver::chain_u(double x, double tau) const {
  const InterfaceNode n = evaluate_interface(tau, data_, f_, g_, conn_);
  // State carried by the data characteristic that reaches the interface at tau.
  auto data_state = [&](double y, double fallback_char, double theta) {
    if (y == 0.0) return theta;
    if (data_.is_piecewise() && data_.u0_left(y) != data_.u0(y)) return fallback_char;  // foot on a fan
    return data_.u0(y);
  };
  if (x > 0.0) {
    if (crit_left_) {
      return branch_inverse(f_, Branch::increasing, g_(data_state(n.y_minus, n.u_left, g_.theta())), 1e-9);
    }
    return branch_inverse(f_, Branch::increasing, std::max(-n.bprime_minus, f_(conn_.B)), 1e-9);
  }
  if (crit_right_) {
    return branch_inverse(g_, Branch::decreasing, f_(data_state(n.y_plus, n.u_right, f_.theta())), 1e-9);
  }
  return branch_inverse(g_, Branch::decreasing, std::max(-n.bprime_plus, g_(conn_.A)), 1e-9);
}

double MonotonicityReport::worst() const { return std::max({y_plus, t_plus, t_minus, y_minus}); }

MonotonicityReport check_monotonicity(const SolutionField& field) {
  MonotonicityReport r;
  const auto& xs = field.xs;
  std::optional<double> prev_y_plus, prev_t_plus, prev_t_minus, prev_y_minus;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const Foot& ft = field.feet[i];
    const bool data = ft.type == FootType::data;
    if (x > 0.0) {
      if (x >= field.R) {
        if (!data) {
          r.y_plus = std::max(r.y_plus, 1.0);  // interface foot beyond the front
          continue;
        }
        if (prev_y_plus) r.y_plus = std::max(r.y_plus, *prev_y_plus - ft.value);
        prev_y_plus = ft.value;
      } else {
        if (data) {
          r.t_plus = std::max(r.t_plus, 1.0);
          continue;
        }
        if (prev_t_plus) r.t_plus = std::max(r.t_plus, ft.value - *prev_t_plus);
        prev_t_plus = ft.value;
      }
    } else {
      if (x > field.L) {
        if (data) {
          r.t_minus = std::max(r.t_minus, 1.0);
          continue;
        }
        if (prev_t_minus) r.t_minus = std::max(r.t_minus, *prev_t_minus - ft.value);
        prev_t_minus = ft.value;
      } else {
        if (!data) {
          r.y_minus = std::max(r.y_minus, 1.0);
          continue;
        }
        if (prev_y_minus) r.y_minus = std::max(r.y_minus, *prev_y_minus - ft.value);
        prev_y_minus = ft.value;
      }
    }
  }
  return r;
}

void write_field_csv(std::ostream& os, const SolutionField& field) {
  const auto old = os.precision(17);
  os << "x,u,foot_type,foot_value\n";
  for (std::size_t i = 0; i < field.xs.size(); ++i) {
    os << field.xs[i] << ',' << field.u[i] << ','
       << (field.feet[i].type == FootType::data ? "data" : "interface") << ',' << field.feet[i].value << '\n';
  }
  os.precision(old);
}

void write_fronts_json(std::ostream& os, const SolutionField& field, const Traces& traces) {
  const auto old = os.precision(17);
  os << "{\"t\": " << field.t << ", \"R\": " << field.R << ", \"L\": " << field.L
     << ", \"u0plus\": " << traces.u0plus << ", \"u0minus\": " << traces.u0minus << "}\n";
  os.precision(old);
}

}  // namespace discflux
