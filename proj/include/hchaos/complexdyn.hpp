#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hchaos/core.hpp"
#include "hchaos/dynamics.hpp"
#include "hchaos/gaussian.hpp"
#include "hchaos/linalg.hpp"
#include "hchaos/ode.hpp"
#include "hchaos/stability.hpp"

namespace hchaos {

struct ComplexPhasePoint {
  cplx q;
  cplx p;
};

/// Piecewise-linear path in the complex time plane starting at 0.
struct TimePath {
  std::vector<cplx> waypoints{cplx(0.0)};

  static TimePath straight(cplx t_final) { return TimePath{{cplx(0.0), t_final}}; }
  static TimePath through(std::vector<cplx> pts) {
    pts.insert(pts.begin(), cplx(0.0));
    return TimePath{std::move(pts)};
  }
  cplx t_final() const { return waypoints.back(); }
  double length() const {
    double l = 0.0;
    for (std::size_t i = 1; i < waypoints.size(); ++i) l += std::abs(waypoints[i] - waypoints[i - 1]);
    return l;
  }
};

struct ComplexOptions {
  double escape_radius = 1e6;
  OdeOptions ode{};
};

enum class ComplexStatus { completed, escaped, branch_cut };

inline const char* to_string(ComplexStatus s) {
  switch (s) {
    case ComplexStatus::completed: return "completed";
    case ComplexStatus::escaped: return "escaped";
    case ComplexStatus::branch_cut: return "branch_cut";
  }
  return "?";
}

struct ComplexTrajectory {
  std::vector<cplx> times;
  std::vector<ComplexPhasePoint> points;
  std::vector<CMat2> tangents;  // (p, q) block order
  ComplexPhasePoint end{};
  CMat2 monodromy = CMat2::identity();
  cplx action{0.0};
  ComplexStatus status = ComplexStatus::completed;
  cplx stop_time{0.0};  // escape time or the point where the step collapsed
  double peak_q = 0.0;  // largest |q| met along the path
};

/// Hamilton's equations continued along a complex time path.
inline ComplexTrajectory complex_integrate(const MapSystem& m, const ComplexPhasePoint& z0,
                                           const TimePath& path, const ComplexOptions& opt = {}) {
  if (!m.is_flow()) throw Error(ErrorKind::unsupported, "complex_integrate needs a smooth flow");
  if (path.waypoints.size() < 2 || path.waypoints.front() != cplx(0.0)) {
    throw Error(ErrorKind::invalid_input, "time path must start at 0 and have a segment");
  }
  ComplexTrajectory tr;
  FlowState<cplx> y = flow_initial(z0.q, z0.p);
  auto push = [&](cplx t, const FlowState<cplx>& st) {
    tr.times.push_back(t);
    tr.points.push_back({st[0], st[1]});
    tr.tangents.push_back({st[3], st[4], st[5], st[6]});
    tr.peak_q = std::max(tr.peak_q, std::abs(st[0]));
  };
  push(0.0, y);
  auto rhs = [&](const FlowState<cplx>& s) { return flow_rhs(m, s); };
  for (std::size_t k = 1; k < path.waypoints.size(); ++k) {
    const cplx a = path.waypoints[k - 1], b = path.waypoints[k];
    const double len = std::abs(b - a);
    if (len == 0.0) continue;
    const cplx dir = (b - a) / len;
    bool escaped = false;
    cplx t_esc{};
    const OdeReport rep = integrate_dop853(rhs, y, dir, len, opt.ode,
                                           [&](double s, const FlowState<cplx>& st) {
                                             push(a + dir * s, st);
                                             if (std::abs(st[0]) > opt.escape_radius) {
                                               escaped = true;
                                               t_esc = a + dir * s;
                                               return false;
                                             }
                                             return true;
                                           });
    if (escaped) {
      tr.status = ComplexStatus::escaped;
      tr.stop_time = t_esc;
      break;
    }
    if (rep.status == OdeStatus::step_underflow) {
      tr.status = ComplexStatus::branch_cut;
      tr.stop_time = a + dir * rep.s_reached;
      break;
    }
  }
  tr.end = {y[0], y[1]};
  tr.action = y[2];
  tr.monodromy = {y[3], y[4], y[5], y[6]};
  if (tr.status == ComplexStatus::completed) tr.stop_time = path.t_final();
  return tr;
}

/// Largest |H - H(0)| along a complex trajectory.
inline double complex_energy_drift(const MapSystem& m, const ComplexTrajectory& tr) {
  const cplx e0 = m.hamiltonian(tr.points.front().q, tr.points.front().p);
  double worst = 0.0;
  for (const auto& z : tr.points) worst = std::max(worst, std::abs(m.hamiltonian(z.q, z.p) - e0));
  return worst;
}

// ---------------------------------------------------------------------------------------
// Airy benchmark: H = p^2 + q at E = 0 with hbar = 1, whose eigenfunction is Ai(q).

struct AiryWkbOptions {
  double min_action = 0.5;  // |S| below this lies inside the turning-point zone
  ComplexOptions integ{};
};

struct AiryWkb {
  double value = 0.0;
  cplx action{0.0};
  cplx momentum{0.0};
};

inline AiryWkb airy_wkb(double q, const AiryWkbOptions& opt = {}) {
  if (!std::isfinite(q)) throw Error(ErrorKind::invalid_input, "q must be finite");
  const MapSystem ramp = MapSystem::linear_ramp(0.5, 1.0);
  // Leaving the turning point (0, 0): q(t) = -t^2, p(t) = -t. Real time reaches q < 0,
  // imaginary time reaches q > 0 with imaginary momentum.
  const double tau = std::sqrt(std::abs(q));
  const cplx t_end = q < 0.0 ? cplx(tau, 0.0) : cplx(0.0, -tau);
  const ComplexTrajectory tr = complex_integrate(ramp, {0.0, 0.0}, TimePath::straight(t_end), opt.integ);
  if (tr.status != ComplexStatus::completed) {
    throw Error(ErrorKind::non_convergence, "airy trajectory did not complete");
  }
  AiryWkb r;
  r.action = tr.action;
  r.momentum = tr.end.p;
  if (std::abs(tr.action) < opt.min_action) {
    throw Error(ErrorKind::invalid_input, "q inside the turning-point exclusion zone");
  }
  const double amp = 1.0 / (2.0 * std::sqrt(kPi) * std::sqrt(std::abs(tr.end.p)));
  if (q < 0.0) {
    // two real branches exp(+-i(S - pi/4))
    r.value = 2.0 * amp * std::cos(tr.action.real() - 0.25 * kPi);
  } else {
    // decaying branch only
    r.value = amp * std::exp(cplx(0.0, 1.0) * tr.action).real();
  }
  return r;
}

/// Ai(x) from the integral along the ray arg s = 2 pi / 3, where exp(-s^3 / 3) decays.
/// Composite Simpson on [0, L]; valid for moderate |x|.
inline double airy_integral(double x, std::size_t intervals = 200000, double L = 15.0) {
  if (!std::isfinite(x)) throw Error(ErrorKind::invalid_input, "x must be finite");
  if (intervals % 2) ++intervals;
  const cplx w = std::polar(1.0, 2.0 * kPi / 3.0);
  cplx sum{0.0};
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double s = L * static_cast<double>(i) / static_cast<double>(intervals);
    const double wt = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += wt * std::exp(cplx(-s * s * s / 3.0) + x * s * w);
  }
  sum *= L / static_cast<double>(intervals) / 3.0;
  return (std::polar(1.0, kPi / 6.0) * sum).real() / kPi;
}

// ---------------------------------------------------------------------------------------
// Wave-packet Lagrangian manifolds

/// Point of b (Q - q) + i (P - p) = 0 at position Q.
inline ComplexPhasePoint lagrangian_manifold_point(const GaussianState& s, cplx Q) {
  return {Q, cplx(s.p) + cplx(0.0, 1.0) * s.b * (Q - s.q)};
}

inline cplx manifold_residual(const GaussianState& s, const ComplexPhasePoint& z) {
  return s.b * (z.q - s.q) + cplx(0.0, 1.0) * (z.p - s.p);
}

struct ContourPoint {
  cplx parameter;  // Q0 - q
  cplx Qt;
  ComplexStatus status = ComplexStatus::completed;
  cplx stop_time;
  double peak_q = 0.0;
};

struct ContourGrid {
  double re0 = -1.0, re1 = 1.0, im0 = -1.0, im1 = 1.0;
  std::size_t n_re = 41, n_im = 41;
};

struct ContourMap {
  ContourGrid grid;
  double t = 0.0;
  std::vector<ContourPoint> points;  // row-major over (im, re)

  const ContourPoint& at(std::size_t i_re, std::size_t i_im) const {
    return points[i_im * grid.n_re + i_re];
  }
};

/// Period of the real centroid trajectory of a quartic oscillator V = alpha q^4.
inline double quartic_period(const MapSystem& m, double energy) {
  if (m.kind != MapKind::quartic || !(energy > 0.0)) {
    throw Error(ErrorKind::invalid_input, "quartic period needs E > 0");
  }
  const double a = std::pow(energy / m.alpha, 0.25);
  const double I = 0.25 * std::beta(0.25, 0.5);  // int_0^1 du / sqrt(1 - u^4)
  return 4.0 * a * I * std::sqrt(m.mass / (2.0 * energy));
}

inline ContourMap contour_map(const GaussianState& s, const MapSystem& m, double t,
                              const ContourGrid& grid, const ComplexOptions& opt = {},
                              unsigned threads = 0) {
  s.validate();
  ContourMap cm;
  cm.grid = grid;
  cm.t = t;
  const std::size_t total = grid.n_re * grid.n_im;
  cm.points.resize(total);
  auto cell = [&](std::size_t k) {
    const std::size_t ir = k % grid.n_re, ii = k / grid.n_re;
    const double re = grid.n_re > 1 ? grid.re0 + (grid.re1 - grid.re0) * ir / (grid.n_re - 1) : grid.re0;
    const double im = grid.n_im > 1 ? grid.im0 + (grid.im1 - grid.im0) * ii / (grid.n_im - 1) : grid.im0;
    const cplx par(re, im);
    const ComplexPhasePoint z0 = lagrangian_manifold_point(s, cplx(s.q) + par);
    ContourPoint& out = cm.points[k];
    out.parameter = par;
    try {
      const ComplexTrajectory tr = complex_integrate(m, z0, TimePath::straight(t), opt);
      out.Qt = tr.end.q;
      out.status = tr.status;
      out.stop_time = tr.stop_time;
      out.peak_q = tr.peak_q;
    } catch (const Error&) {
      out.status = ComplexStatus::branch_cut;
    }
  };
  unsigned nt = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  nt = static_cast<unsigned>(std::min<std::size_t>(nt, total));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < nt; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < total; k += nt) cell(k);
    });
  }
  for (auto& th : pool) th.join();
  return cm;
}

/// Golden-section search between two manifold parameters for the initial condition whose
/// trajectory runs into a pole of q(t) on the real time axis.
inline std::optional<ContourPoint> locate_escape(const GaussianState& s, const MapSystem& m,
                                                 double t, cplx a, cplx b,
                                                 const ComplexOptions& opt = {},
                                                 std::size_t max_iter = 200) {
  auto eval = [&](cplx par) {
    ContourPoint cp;
    cp.parameter = par;
    const ComplexTrajectory tr =
        complex_integrate(m, lagrangian_manifold_point(s, cplx(s.q) + par), TimePath::straight(t), opt);
    cp.Qt = tr.end.q;
    cp.status = tr.status;
    cp.stop_time = tr.stop_time;
    cp.peak_q = tr.peak_q;
    return cp;
  };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  cplx x1 = b - g * (b - a), x2 = a + g * (b - a);
  ContourPoint f1 = eval(x1), f2 = eval(x2);
  for (std::size_t it = 0; it < max_iter; ++it) {
    for (const ContourPoint* f : {&f1, &f2}) {
      if (f->status != ComplexStatus::completed) return *f;
    }
    if (std::abs(b - a) < 1e-15) break;
    if (f1.peak_q > f2.peak_q) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = eval(x2);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------------------
// Complex two-point boundary problem

struct SaddleOptions {
  std::size_t max_iter = 60;
  double tol = 1e-10;
  ComplexOptions integ{};
};

struct SaddleResult {
  ComplexPhasePoint start;
  ComplexTrajectory trajectory;
  cplx residual1, residual2;
  std::size_t iterations = 0;
};

/// Newton on b1 (Q0 - q1) + i (P0 - p1) = 0 and b2* (Qt - q2) - i (Pt - p2) = 0.
inline SaddleResult saddle_search(const GaussianState& s1, const GaussianState& s2,
                                  const MapSystem& m, double t, const ComplexPhasePoint& seed,
                                  const SaddleOptions& opt = {}) {
  s1.validate();
  s2.validate();
  const cplx I(0.0, 1.0);
  const cplx b2c = std::conj(s2.b);
  ComplexPhasePoint z = seed;
  SaddleResult res;
  for (std::size_t it = 0; it <= opt.max_iter; ++it) {
    const ComplexTrajectory tr = complex_integrate(m, z, TimePath::straight(t), opt.integ);
    if (tr.status != ComplexStatus::completed) {
      throw Error(ErrorKind::non_convergence,
                  std::string("saddle iterate ") + to_string(tr.status) + " at iteration " +
                      std::to_string(it));
    }
    const cplx r1 = s1.b * (z.q - s1.q) + I * (z.p - s1.p);
    const cplx r2 = b2c * (tr.end.q - s2.q) - I * (tr.end.p - s2.p);
    res.start = z;
    res.trajectory = tr;
    res.residual1 = r1;
    res.residual2 = r2;
    res.iterations = it;
    if (std::abs(r1) < opt.tol && std::abs(r2) < opt.tol) return res;
    const CMat2& M = tr.monodromy;
    // unknowns (dP0, dQ0)
    const CMat2 J{I, s1.b, b2c * M.m21 - I * M.m11, b2c * M.m22 - I * M.m12};
    const cplx det = J.det();
    if (std::abs(det) < 1e-300) throw Error(ErrorKind::singular, "saddle Jacobian singular");
    const CMat2 Ji = J.inverse();
    const cplx dP = -(Ji.m11 * r1 + Ji.m12 * r2);
    const cplx dQ = -(Ji.m21 * r1 + Ji.m22 * r2);
    z.p += dP;
    z.q += dQ;
  }
  throw Error(ErrorKind::non_convergence, "saddle Newton did not converge");
}

// ---------------------------------------------------------------------------------------
// Determinant phase tracking

enum class DeterminantKind { D0, D1, D2 };

inline const char* to_string(DeterminantKind k) {
  switch (k) {
    case DeterminantKind::D0: return "D0";
    case DeterminantKind::D1: return "D1";
    case DeterminantKind::D2: return "D2";
  }
  return "?";
}

struct PhaseTracker {
  DeterminantKind kind = DeterminantKind::D1;
  std::vector<double> times;
  std::vector<cplx> values;
  std::vector<double> phase;  // unwrapped arg
  double winding = 0.0;       // total phase / 2 pi
  std::size_t sign_flip_corrections = 0;
  std::size_t resampled = 0;
};

struct TrackOptions {
  std::size_t samples = 200;
  double max_jump = 0.5 * kPi;
  double min_dt = 1e-10;
};

/// Unwrap arg D(t) on [t0, t1], bisecting any interval whose phase jump is >= max_jump.
inline PhaseTracker track_determinant(const std::function<cplx(double)>& D, double t0, double t1,
                                      DeterminantKind kind, const TrackOptions& opt = {}) {
  if (opt.samples < 2 || !(t1 > t0)) throw Error(ErrorKind::invalid_input, "bad tracking window");
  PhaseTracker pt;
  pt.kind = kind;
  auto jump = [](cplx a, cplx b) { return std::arg(b / a); };
  std::vector<std::pair<double, cplx>> pts;
  for (std::size_t i = 0; i < opt.samples; ++i) {
    const double t = t0 + (t1 - t0) * i / (opt.samples - 1);
    pts.push_back({t, D(t)});
  }
  std::vector<std::pair<double, cplx>> out{pts.front()};
  std::vector<std::pair<double, cplx>> stack;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    stack.push_back(pts[i]);
    while (!stack.empty()) {
      const auto a = out.back();
      const auto b = stack.back();
      if (std::abs(a.second) == 0.0) {
        throw Error(ErrorKind::singular, "determinant vanishes at t=" + std::to_string(a.first));
      }
      if (std::abs(jump(a.second, b.second)) < opt.max_jump) {
        out.push_back(b);
        stack.pop_back();
        continue;
      }
      if (b.first - a.first < opt.min_dt) {
        throw Error(ErrorKind::singular,
                    "determinant passes through zero near t=" + std::to_string(a.first));
      }
      const double tm = 0.5 * (a.first + b.first);
      stack.push_back({tm, D(tm)});
      ++pt.resampled;
    }
  }
  double ph = std::arg(out.front().second);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i > 0) ph += jump(out[i - 1].second, out[i].second);
    pt.times.push_back(out[i].first);
    pt.values.push_back(out[i].second);
    pt.phase.push_back(ph);
  }
  pt.winding = (pt.phase.back() - pt.phase.front()) / (2.0 * kPi);
  return pt;
}

/// Determinant along a real flow trajectory, evaluated by integrating from the nearest cached
/// earlier time.
class FlowDeterminant {
 public:
  FlowDeterminant(const MapSystem& m, const PhasePoint& x0, DeterminantKind kind, cplx b_alpha,
                  cplx b_beta, OdeOptions opt = {})
      : m_(m), kind_(kind), ba_(b_alpha), bb_(b_beta), opt_(opt) {
    cache_[0.0] = flow_initial<double>(x0.q, x0.p);
  }

  cplx operator()(double t) {
    auto it = cache_.upper_bound(t);
    --it;
    FlowState<double> y = it->second;
    const double len = t - it->first;
    if (len > 0.0) {
      auto rhs = [&](const FlowState<double>& s) { return flow_rhs(m_, s); };
      const OdeReport rep = integrate_dop853(rhs, y, 1.0, len, opt_,
                                             [](double, const FlowState<double>&) { return true; });
      if (rep.status != OdeStatus::ok) throw Error(ErrorKind::step_underflow, "flow stalled");
      cache_[t] = y;
    }
    const RMat2 M{y[3], y[4], y[5], y[6]};
    const Determinants d = semiclassical_determinants(M, ba_, bb_);
    switch (kind_) {
      case DeterminantKind::D0: return d.D0;
      case DeterminantKind::D1: return d.D1;
      case DeterminantKind::D2: return d.D2;
    }
    return d.D1;
  }

 private:
  MapSystem m_;
  DeterminantKind kind_;
  cplx ba_, bb_;
  OdeOptions opt_;
  std::map<double, FlowState<double>> cache_;
};

struct SweepCorrection {
  std::vector<double> half_phase;  // corrected
  std::size_t corrections = 0;
  double max_jump = 0.0;
};

/// Half-phases of sqrt(D) across a parameter sweep. A jump near pi between neighbours is the
/// sign ambiguity of the square root and is removed by flipping the sign.
inline SweepCorrection correct_sign_flips(const std::vector<double>& half_phase,
                                          double threshold = 0.5 * kPi) {
  SweepCorrection sc;
  double offset = 0.0;
  for (std::size_t i = 0; i < half_phase.size(); ++i) {
    double v = half_phase[i] + offset;
    if (i > 0) {
      const double d = v - sc.half_phase.back();
      if (std::abs(d) > threshold) {
        const double k = std::round(d / kPi);
        offset -= k * kPi;
        v -= k * kPi;
        ++sc.corrections;
      }
      sc.max_jump = std::max(sc.max_jump, std::abs(v - sc.half_phase.back()));
    }
    sc.half_phase.push_back(v);
  }
  return sc;
}

}  // namespace hchaos
