#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hchaos/core.hpp"
#include "hchaos/linalg.hpp"
#include "hchaos/ode.hpp"
#include "hchaos/stadium.hpp"

namespace hchaos {

enum class MapKind { standard, baker, stadium, harmonic, quartic, linear_ramp };
enum class Chart { torus, cylinder, billiard, plane };

inline const char* to_string(MapKind k) {
  switch (k) {
    case MapKind::standard: return "standard-map";
    case MapKind::baker: return "bakers-map";
    case MapKind::stadium: return "stadium";
    case MapKind::harmonic: return "harmonic";
    case MapKind::quartic: return "quartic";
    case MapKind::linear_ramp: return "linear-ramp";
  }
  return "unknown";
}

/// A discrete symplectic map or a smooth one-degree-of-freedom flow H = p^2/2m + V(q).
struct MapSystem {
  MapKind kind = MapKind::standard;
  Chart chart = Chart::torus;
  double K = 0.0;      // standard map kick strength
  double gamma = 1.0;  // stadium half straight-edge length
  double mass = 1.0;
  double omega = 1.0;  // harmonic frequency
  double alpha = 1.0;  // quartic coefficient or ramp slope

  static MapSystem standard_map(double k, Chart c = Chart::torus) {
    if (!std::isfinite(k)) throw Error(ErrorKind::invalid_input, "standard map K must be finite");
    if (c != Chart::torus && c != Chart::cylinder) {
      throw Error(ErrorKind::invalid_input, "standard map lives on the torus or cylinder");
    }
    MapSystem m;
    m.kind = MapKind::standard;
    m.chart = c;
    m.K = k;
    return m;
  }
  static MapSystem baker() {
    MapSystem m;
    m.kind = MapKind::baker;
    m.chart = Chart::torus;
    return m;
  }
  static MapSystem stadium(double g) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw Error(ErrorKind::invalid_input, "stadium requires gamma > 0");
    }
    MapSystem m;
    m.kind = MapKind::stadium;
    m.chart = Chart::billiard;
    m.gamma = g;
    return m;
  }
  static MapSystem harmonic(double m_ = 1.0, double w = 1.0) {
    MapSystem m;
    m.kind = MapKind::harmonic;
    m.chart = Chart::plane;
    m.mass = m_;
    m.omega = w;
    return m;
  }
  static MapSystem quartic(double m_ = 1.0, double a = 1.0) {
    MapSystem m;
    m.kind = MapKind::quartic;
    m.chart = Chart::plane;
    m.mass = m_;
    m.alpha = a;
    return m;
  }
  /// H = p^2/2m + alpha q; the defaults give H = p^2 + q.
  static MapSystem linear_ramp(double m_ = 0.5, double a = 1.0) {
    MapSystem m;
    m.kind = MapKind::linear_ramp;
    m.chart = Chart::plane;
    m.mass = m_;
    m.alpha = a;
    return m;
  }

  bool is_flow() const {
    return kind == MapKind::harmonic || kind == MapKind::quartic || kind == MapKind::linear_ramp;
  }
  bool is_map() const { return !is_flow(); }

  Stadium geometry() const { return Stadium(gamma); }

  template <typename T>
  T potential(T q) const {
    switch (kind) {
      case MapKind::harmonic: return T(0.5 * mass * omega * omega) * q * q;
      case MapKind::quartic: return T(alpha) * q * q * q * q;
      case MapKind::linear_ramp: return T(alpha) * q;
      default: break;
    }
    throw Error(ErrorKind::unsupported, "potential of a discrete map");
  }
  template <typename T>
  T force(T q) const {  // -V'(q)
    switch (kind) {
      case MapKind::harmonic: return -T(mass * omega * omega) * q;
      case MapKind::quartic: return -T(4.0 * alpha) * q * q * q;
      case MapKind::linear_ramp: return T(-alpha);
      default: break;
    }
    throw Error(ErrorKind::unsupported, "force of a discrete map");
  }
  template <typename T>
  T curvature(T q) const {  // V''(q)
    switch (kind) {
      case MapKind::harmonic: return T(mass * omega * omega);
      case MapKind::quartic: return T(12.0 * alpha) * q * q;
      case MapKind::linear_ramp: return T(0.0);
      default: break;
    }
    throw Error(ErrorKind::unsupported, "curvature of a discrete map");
  }
  template <typename T>
  T hamiltonian(T q, T p) const {
    return p * p / T(2.0 * mass) + potential(q);
  }
  double energy(const PhasePoint& x) const { return hamiltonian(x.q, x.p); }
};

// ---------------------------------------------------------------------------------------
// Single steps

/// One map step with its action increment (generating function) and Jacobian in
/// (p, q) block order.
struct StepResult {
  PhasePoint next;
  double action = 0.0;
  RMat2 jacobian;
};

inline void check_finite(const PhasePoint& x) {
  if (!is_finite(x)) throw Error(ErrorKind::invalid_input, "non-finite phase point");
}

inline PhasePoint standard_map_step(const PhasePoint& x, double K, Chart chart = Chart::torus) {
  check_finite(x);
  if (!std::isfinite(K)) throw Error(ErrorKind::invalid_input, "non-finite K");
  double p = x.p - K / kTwoPi * std::sin(kTwoPi * x.q);
  double q = x.q + p;
  if (chart == Chart::torus) p = wrap01(p);
  return {wrap01(q), p};
}

inline PhasePoint baker_step(const PhasePoint& x) {
  check_finite(x);
  if (x.q < 0.0 || x.q >= 1.0 || x.p < 0.0 || x.p >= 1.0) {
    throw Error(ErrorKind::invalid_input, "baker's map point outside the unit square");
  }
  const double b = std::floor(2.0 * x.q);
  return {2.0 * x.q - b, 0.5 * x.p + 0.5 * b};
}

inline PhasePoint baker_step_back(const PhasePoint& x) {
  check_finite(x);
  const double b = std::floor(2.0 * x.p);
  return {0.5 * (x.q + b), 2.0 * x.p - b};
}

inline PhasePoint stadium_bounce(const PhasePoint& x, double gamma) {
  return Stadium(gamma).bounce(x).next;
}

inline StepResult step(const MapSystem& m, const PhasePoint& x) {
  switch (m.kind) {
    case MapKind::standard: {
      check_finite(x);
      const double c = std::cos(kTwoPi * x.q);
      const double pl = x.p - m.K / kTwoPi * std::sin(kTwoPi * x.q);
      const double ql = x.q + pl;
      StepResult r;
      r.action = 0.5 * pl * pl + m.K / (4.0 * kPi * kPi) * c;
      r.jacobian = {1.0, -m.K * c, 1.0, 1.0 - m.K * c};
      r.next = {wrap01(ql), m.chart == Chart::torus ? wrap01(pl) : pl};
      return r;
    }
    case MapKind::baker: {
      StepResult r;
      r.next = baker_step(x);
      const double b = std::floor(2.0 * x.q);
      r.action = r.next.q * r.next.p - (2.0 * x.q * r.next.p - b * x.q - b * r.next.p);
      r.jacobian = {0.5, 0.0, 0.0, 2.0};
      return r;
    }
    case MapKind::stadium: {
      const Stadium s(m.gamma);
      const Bounce b = s.bounce(x);
      return {b.next, b.chord, s.jacobian({wrap_period(x.q, s.perimeter()), x.p}, b)};
    }
    default: break;
  }
  throw Error(ErrorKind::unsupported, std::string("no discrete step for ") + to_string(m.kind));
}

/// Inverse step. The action reported is the forward action of the reversed step.
inline StepResult step_back(const MapSystem& m, const PhasePoint& x) {
  switch (m.kind) {
    case MapKind::standard: {
      check_finite(x);
      const double q = x.q - x.p;
      const double p = x.p + m.K / kTwoPi * std::sin(kTwoPi * q);
      const PhasePoint prev{wrap01(q), m.chart == Chart::torus ? wrap01(p) : p};
      StepResult fwd = step(m, {q, p});
      return {prev, fwd.action, fwd.jacobian.inverse()};
    }
    case MapKind::baker: {
      const PhasePoint prev = baker_step_back(x);
      StepResult fwd = step(m, prev);
      return {prev, fwd.action, fwd.jacobian.inverse()};
    }
    case MapKind::stadium: {
      const Stadium s(m.gamma);
      const Bounce b = s.bounce_back(x);
      const PhasePoint prev = b.next;
      const Bounce fb{{wrap_period(x.q, s.perimeter()), x.p}, b.chord, b.from, b.to};
      return {prev, b.chord, s.jacobian(prev, fb).inverse()};
    }
    default: break;
  }
  throw Error(ErrorKind::unsupported, std::string("no discrete step for ") + to_string(m.kind));
}

// ---------------------------------------------------------------------------------------
// Trajectories

struct TrajectorySegment {
  std::vector<PhasePoint> points;
  std::vector<double> times;         // flows: sample times; maps: step index
  std::vector<double> step_actions;  // maps: per-step action; flows: action between samples
  std::vector<RMat2> tangents;       // stability matrix from the start to each sample
  std::size_t steps = 0;
  double time = 0.0;
  double accumulated_action = 0.0;
};

inline TrajectorySegment iterate(const MapSystem& m, const PhasePoint& x, std::size_t n,
                                 bool with_tangents = false) {
  TrajectorySegment seg;
  seg.points.reserve(n + 1);
  seg.points.push_back(x);
  seg.times.push_back(0.0);
  RMat2 M = RMat2::identity();
  if (with_tangents) seg.tangents.push_back(M);
  PhasePoint cur = x;
  for (std::size_t i = 0; i < n; ++i) {
    StepResult r;
    try {
      r = step(m, cur);
    } catch (const Error& e) {
      throw StepError(e, i);
    }
    cur = r.next;
    seg.points.push_back(cur);
    seg.times.push_back(static_cast<double>(i + 1));
    seg.step_actions.push_back(r.action);
    seg.accumulated_action += r.action;
    if (with_tangents) {
      M = r.jacobian * M;
      seg.tangents.push_back(M);
    }
  }
  seg.steps = n;
  seg.time = static_cast<double>(n);
  return seg;
}

/// Flow state: q, p, action S, then M11, M12, M21, M22 in (p, q) block order.
template <typename T>
using FlowState = std::array<T, 7>;

template <typename T>
FlowState<T> flow_rhs(const MapSystem& m, const FlowState<T>& y) {
  const T q = y[0], p = y[1];
  const T qdot = p / T(m.mass);
  const T pdot = m.force(q);
  const T vpp = m.curvature(q);
  FlowState<T> d;
  d[0] = qdot;
  d[1] = pdot;
  d[2] = p * qdot - m.hamiltonian(q, p);
  // dM/dt = [[-H_qp, -H_qq], [H_pp, H_qp]] M with H_qp = 0.
  d[3] = -vpp * y[5];
  d[4] = -vpp * y[6];
  d[5] = y[3] / T(m.mass);
  d[6] = y[4] / T(m.mass);
  return d;
}

template <typename T>
FlowState<T> flow_initial(T q, T p) {
  return {q, p, T(0), T(1), T(0), T(0), T(1)};
}

inline TrajectorySegment integrate_flow(const MapSystem& m, const PhasePoint& x, double t,
                                        const OdeOptions& opt = {}) {
  if (!m.is_flow()) throw Error(ErrorKind::unsupported, "integrate_flow needs a smooth flow");
  check_finite(x);
  TrajectorySegment seg;
  FlowState<double> y = flow_initial(x.q, x.p);
  auto record = [&](double s, const FlowState<double>& st) {
    seg.points.push_back({st[0], st[1]});
    seg.times.push_back(s);
    const double prev = seg.step_actions.empty() ? 0.0 : seg.accumulated_action;
    seg.step_actions.push_back(st[2] - prev);
    seg.accumulated_action = st[2];
    seg.tangents.push_back({st[3], st[4], st[5], st[6]});
  };
  seg.points.push_back(x);
  seg.times.push_back(0.0);
  seg.tangents.push_back(RMat2::identity());
  const double dir = t >= 0.0 ? 1.0 : -1.0;
  auto rhs = [&](const FlowState<double>& s) { return flow_rhs(m, s); };
  const OdeReport rep = integrate_dop853(rhs, y, dir, std::abs(t), opt,
                                         [&](double s, const FlowState<double>& st) {
                                           record(dir * s, st);
                                           return true;
                                         });
  if (rep.status == OdeStatus::step_underflow) {
    throw Error(ErrorKind::step_underflow,
                "integration stalled at t=" + std::to_string(dir * rep.s_reached));
  }
  seg.steps = rep.accepted;
  seg.time = t;
  return seg;
}

inline double conservation_check(const MapSystem& m, const TrajectorySegment& seg) {
  if (!m.is_flow()) throw Error(ErrorKind::unsupported, "energy check needs a smooth flow");
  if (seg.points.empty()) return 0.0;
  const double e0 = m.energy(seg.points.front());
  double drift = 0.0;
  for (const auto& x : seg.points) drift = std::max(drift, std::abs(m.energy(x) - e0));
  return drift;
}

/// Apply the n-step map, composing Jacobians; returns end point, action, and M.
struct Propagated {
  PhasePoint end;
  double action = 0.0;
  RMat2 M;
};

inline Propagated propagate(const MapSystem& m, const PhasePoint& x, std::size_t n) {
  Propagated out{x, 0.0, RMat2::identity()};
  for (std::size_t i = 0; i < n; ++i) {
    StepResult r;
    try {
      r = step(m, out.end);
    } catch (const Error& e) {
      throw StepError(e, i);
    }
    out.end = r.next;
    out.action += r.action;
    out.M = r.jacobian * out.M;
  }
  return out;
}

/// Periodic length of the q coordinate in the map's chart, or 0 if q is not periodic.
inline double q_period(const MapSystem& m) {
  switch (m.kind) {
    case MapKind::standard:
    case MapKind::baker: return 1.0;
    case MapKind::stadium: return Stadium(m.gamma).perimeter();
    default: return 0.0;
  }
}
inline double p_period(const MapSystem& m) {
  return (m.kind == MapKind::baker || (m.kind == MapKind::standard && m.chart == Chart::torus))
             ? 1.0
             : 0.0;
}

/// Chart-aware difference a - b.
inline PhasePoint chart_diff(const MapSystem& m, const PhasePoint& a, const PhasePoint& b) {
  const double Pq = q_period(m), Pp = p_period(m);
  return {Pq > 0.0 ? periodic_diff(a.q, b.q, Pq) : a.q - b.q,
          Pp > 0.0 ? periodic_diff(a.p, b.p, Pp) : a.p - b.p};
}

inline double chart_distance(const MapSystem& m, const PhasePoint& a, const PhasePoint& b) {
  const PhasePoint d = chart_diff(m, a, b);
  return std::hypot(d.q, d.p);
}

}  // namespace hchaos
