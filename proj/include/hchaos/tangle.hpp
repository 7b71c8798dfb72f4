#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hchaos/core.hpp"
#include "hchaos/dynamics.hpp"
#include "hchaos/orbits.hpp"
#include "hchaos/stability.hpp"

namespace hchaos {

enum class Branch { unstable, stable };

struct ManifoldOptions {
  double eps = 1e-8;         // seed length along the eigenvector
  double max_spacing = 1e-3;  // chart units
  double max_angle = 0.05;    // radians
  double min_du = 1e-13;      // smallest parameter interval that is still split
  std::size_t max_points = 4'000'000;
};

/// Parameterization of one branch of a periodic orbit's invariant manifold:
/// point(u) = T^{+-n floor(u)}(x + side * eps * lambda^{frac(u)} v).
class ManifoldParam {
 public:
  ManifoldParam(const MapSystem& m, const PhasePoint& base, std::size_t period, Branch br,
                int side, double eps)
      : m_(m), base_(base), n_(period), br_(br), side_(side >= 0 ? 1 : -1), eps_(eps) {
    const Propagated pr = propagate(m, base, period);
    const StabilityMatrix S{pr.M, static_cast<double>(period)};
    const ManifoldTangents t = manifold_tangents(S);
    lambda_ = std::abs(t.lambda);
    flip_ = t.lambda < 0.0;
    dir_ = br == Branch::unstable ? t.unstable_end : t.stable_end;
    // Reflection-hyperbolic orbits swap sides each period; step two periods instead.
    if (flip_) {
      n_ *= 2;
      lambda_ *= lambda_;
    }
  }

  const MapSystem& map() const { return m_; }
  const PhasePoint& base() const { return base_; }
  Branch branch() const { return br_; }
  int side() const { return side_; }
  std::size_t steps_per_unit() const { return n_; }
  double lambda() const { return lambda_; }
  PhasePoint direction() const { return dir_; }

  PhasePoint seed(double frac) const {
    const double s = side_ * eps_ * std::pow(lambda_, frac);
    return {base_.q + s * dir_.q, base_.p + s * dir_.p};
  }

  /// Chain of map points from the seed (index 0) to point(u) (last). For the stable branch
  /// the chain is listed in forward-time order ending at the seed.
  std::vector<PhasePoint> chain(double u, std::vector<double>* actions = nullptr) const {
    const double k = std::floor(u);
    const double f = u - k;
    std::vector<PhasePoint> pts{seed(f)};
    const std::size_t steps = static_cast<std::size_t>(k) * n_;
    for (std::size_t i = 0; i < steps; ++i) {
      const StepResult r = br_ == Branch::unstable ? step(m_, pts.back()) : step_back(m_, pts.back());
      pts.push_back(r.next);
      if (actions) actions->push_back(r.action);
    }
    if (br_ == Branch::stable) {
      std::reverse(pts.begin(), pts.end());
      if (actions) std::reverse(actions->begin(), actions->end());
    }
    return pts;
  }

  PhasePoint point(double u) const {
    const double k = std::floor(u);
    PhasePoint x = seed(u - k);
    const std::size_t steps = static_cast<std::size_t>(k) * n_;
    for (std::size_t i = 0; i < steps; ++i) {
      x = br_ == Branch::unstable ? step(m_, x).next : step_back(m_, x).next;
    }
    return x;
  }

 private:
  MapSystem m_;
  PhasePoint base_;
  std::size_t n_;
  Branch br_;
  int side_;
  double eps_;
  double lambda_ = 1.0;
  bool flip_ = false;
  PhasePoint dir_;
};

struct ManifoldSegment {
  PhasePoint base;  // orbit point the branch emanates from
  std::size_t orbit_period = 0;
  Branch branch = Branch::unstable;
  int side = 1;
  std::vector<PhasePoint> points;  // unfolded chart coordinates, points[0] = base
  std::vector<double> params;      // manifold parameter u per point (-inf for the base)
  std::vector<double> arclength;
  std::size_t generation = 0;
  bool complete = true;  // false when growth stopped on a step failure
  std::string failure;
};

namespace detail {
inline double turn_angle(const PhasePoint& a, const PhasePoint& m, const PhasePoint& b) {
  const double x1 = m.q - a.q, y1 = m.p - a.p, x2 = b.q - m.q, y2 = b.p - m.p;
  const double n1 = std::hypot(x1, y1), n2 = std::hypot(x2, y2);
  if (n1 == 0.0 || n2 == 0.0) return 0.0;
  const double c = std::clamp((x1 * x2 + y1 * y2) / (n1 * n2), -1.0, 1.0);
  return std::acos(c);
}

/// Shift q by multiples of the chart period so it is continuous with `ref`.
inline PhasePoint unfold(const MapSystem& m, PhasePoint x, double ref_q) {
  const double P = q_period(m);
  if (P > 0.0) x.q = ref_q + periodic_diff(x.q, ref_q, P);
  return x;
}
}  // namespace detail

inline ManifoldSegment grow_manifold(const ManifoldParam& par, double arclength_budget,
                                     const ManifoldOptions& opt = {}) {
  ManifoldSegment seg;
  seg.base = par.base();
  seg.orbit_period = par.steps_per_unit();
  seg.branch = par.branch();
  seg.side = par.side();
  seg.points.push_back(par.base());
  seg.params.push_back(-std::numeric_limits<double>::infinity());
  seg.arclength.push_back(0.0);
  const MapSystem& m = par.map();

  auto eval = [&](double u, double ref_q) { return detail::unfold(m, par.point(u), ref_q); };
  double ua = 0.0;
  PhasePoint A = eval(0.0, par.base().q);
  seg.points.push_back(A);
  seg.params.push_back(0.0);
  seg.arclength.push_back(distance(A, par.base()));

  const double du0 = 1.0 / 64.0;
  struct Item {
    double u;
    PhasePoint x;
  };
  try {
    while (seg.arclength.back() < arclength_budget) {
      const double ub = ua + du0;
      PhasePoint B = eval(ub, A.q);
      // Depth-first subdivision of [ua, ub].
      std::vector<Item> stack{{ub, B}};
      while (!stack.empty()) {
        const Item top = stack.back();
        const double um = 0.5 * (ua + top.u);
        bool split = false;
        PhasePoint M;
        if (top.u - ua > opt.min_du) {
          M = eval(um, A.q);
          split = distance(A, top.x) > opt.max_spacing ||
                  detail::turn_angle(A, M, top.x) > opt.max_angle;
        }
        if (split) {
          stack.push_back({um, M});
          continue;
        }
        stack.pop_back();
        const PhasePoint X = detail::unfold(m, top.x, A.q);
        seg.points.push_back(X);
        seg.params.push_back(top.u);
        seg.arclength.push_back(seg.arclength.back() + distance(A, X));
        ua = top.u;
        A = X;
        if (seg.points.size() > opt.max_points) {
          throw Error(ErrorKind::budget, "manifold point limit reached");
        }
        // Keep pending stack entries continuous with the newly accepted point.
        for (auto& it : stack) it.x = detail::unfold(m, it.x, A.q);
      }
    }
  } catch (const Error& e) {
    seg.complete = false;
    seg.failure = e.what();
  }
  seg.generation = static_cast<std::size_t>(std::max(0.0, std::floor(seg.params.back())));
  return seg;
}

inline ManifoldSegment grow_manifold(const MapSystem& m, const PeriodicOrbit& orbit,
                                     std::size_t point_index, Branch br, int side,
                                     double arclength_budget, const ManifoldOptions& opt = {}) {
  if (std::abs(orbit.monodromy.M.trace()) <= 2.0) {
    throw Error(ErrorKind::invalid_input, "manifolds need a hyperbolic orbit");
  }
  const ManifoldParam par(m, orbit.points.at(point_index), orbit.period, br, side, opt.eps);
  return grow_manifold(par, arclength_budget, opt);
}

// ---------------------------------------------------------------------------------------
// Homoclinic points

struct HomoclinicPoint {
  PhasePoint location;  // chart coordinates (wrapped)
  double u = 0.0;       // parameter on the unstable branch
  double s = 0.0;       // parameter on the stable branch
  std::size_t u_index = 0;  // polyline segment index on U
  std::size_t s_index = 0;  // polyline segment index on S
  double crossing_angle = 0.0;
  bool near_tangent = false;
  double residual = 0.0;
  std::optional<double> relative_action;
};

namespace detail {
/// Intersection of segments p0-p1 and q0-q1; returns (t, s) in [0,1]^2 if they cross.
inline std::optional<std::pair<double, double>> seg_cross(const PhasePoint& p0,
                                                          const PhasePoint& p1,
                                                          const PhasePoint& q0,
                                                          const PhasePoint& q1) {
  const double rx = p1.q - p0.q, ry = p1.p - p0.p;
  const double sx = q1.q - q0.q, sy = q1.p - q0.p;
  const double den = rx * sy - ry * sx;
  if (den == 0.0) return std::nullopt;
  const double dx = q0.q - p0.q, dy = q0.p - p0.p;
  const double t = (dx * sy - dy * sx) / den;
  const double s = (dx * ry - dy * rx) / den;
  if (t < 0.0 || t >= 1.0 || s < 0.0 || s >= 1.0) return std::nullopt;
  return std::make_pair(t, s);
}
}  // namespace detail

/// Refine a crossing of two manifold branches. Each iteration intersects the local chords
/// U(u +- du) and S(s +- ds) and recenters the parameters on the intersection, shrinking the
/// chords until they are about `chord` long. The location is the chord intersection, which
/// is insensitive to round-off in the parameterization along the manifold.
inline std::optional<HomoclinicPoint> refine_crossing(const ManifoldParam& U,
                                                      const ManifoldParam& S, double u,
                                                      double s, double du, double ds,
                                                      double chord = 1e-6) {
  const MapSystem& m = U.map();
  HomoclinicPoint h;
  du = std::max(du, 1e-14);
  ds = std::max(ds, 1e-14);
  PhasePoint prev{1e300, 1e300};
  for (int it = 0; it < 80; ++it) {
    const PhasePoint a1 = U.point(u - du);
    const PhasePoint a2 = detail::unfold(m, U.point(u + du), a1.q);
    const PhasePoint b1 = detail::unfold(m, S.point(s - ds), a1.q);
    const PhasePoint b2 = detail::unfold(m, S.point(s + ds), b1.q);
    const double rx = a2.q - a1.q, ry = a2.p - a1.p;
    const double sx = b2.q - b1.q, sy = b2.p - b1.p;
    const double den = rx * sy - ry * sx;
    if (den == 0.0 || !std::isfinite(den)) return std::nullopt;
    const double dx = b1.q - a1.q, dy = b1.p - a1.p;
    const double t = (dx * sy - dy * sx) / den;
    const double r = (dx * ry - dy * rx) / den;
    const PhasePoint x{a1.q + t * rx, a1.p + t * ry};
    u += (2.0 * t - 1.0) * du;
    s += (2.0 * r - 1.0) * ds;
    const double la = std::hypot(rx, ry), lb = std::hypot(sx, sy);
    h.crossing_angle = std::asin(std::min(1.0, std::abs(den) / (la * lb)));
    const bool inside = std::abs(t - 0.5) <= 2.0 && std::abs(r - 0.5) <= 2.0;
    if (inside) {
      if (la > chord) du *= std::max(0.1, chord / la);
      if (lb > chord) ds *= std::max(0.1, chord / lb);
    }
    const double moved = std::hypot(x.q - prev.q, x.p - prev.p);
    prev = x;
    if (la <= 1.01 * chord && lb <= 1.01 * chord && moved < 1e-14) break;
    if (it == 79 && moved > 1e-10) return std::nullopt;
  }
  h.location = prev;
  h.u = u;
  h.s = s;
  const PhasePoint pu = U.point(u), ps = S.point(s);
  h.residual = std::max(chart_distance(m, pu, prev), chart_distance(m, ps, prev));
  return h;
}

/// All crossings between an unstable and a stable polyline, refined on the true map and
/// ordered along U.
inline std::vector<HomoclinicPoint> find_homoclinic_points(const ManifoldParam& Upar,
                                                           const ManifoldSegment& U,
                                                           const ManifoldParam& Spar,
                                                           const ManifoldSegment& S,
                                                           double tangent_angle = 1e-6) {
  std::vector<HomoclinicPoint> out;
  const MapSystem& m = Upar.map();
  const double P = q_period(m);
  if (U.points.size() < 3 || S.points.size() < 3) return out;
  // Bucket S segments on a coarse grid (q wrapped).
  const double cell = 0.05;
  auto key = [&](double q, double p) {
    const double qq = P > 0.0 ? wrap_period(q, P) : q;
    return std::make_pair(static_cast<long long>(std::floor(qq / cell)),
                          static_cast<long long>(std::floor(p / cell)));
  };
  const long long nq = P > 0.0 ? static_cast<long long>(std::ceil(P / cell)) : 0;
  std::multimap<std::pair<long long, long long>, std::size_t> grid;
  for (std::size_t j = 1; j + 1 < S.points.size(); ++j) {
    const auto a = key(S.points[j].q, S.points[j].p);
    const auto b = key(S.points[j + 1].q, S.points[j + 1].p);
    for (long long x = std::min(a.first, b.first); x <= std::max(a.first, b.first); ++x) {
      for (long long y = std::min(a.second, b.second); y <= std::max(a.second, b.second); ++y) {
        grid.insert({{nq ? ((x % nq) + nq) % nq : x, y}, j});
      }
    }
  }
  for (std::size_t i = 1; i + 1 < U.points.size(); ++i) {
    const PhasePoint u0 = U.points[i], u1 = U.points[i + 1];
    const auto k = key(u0.q, u0.p);
    std::vector<std::size_t> cand;
    for (long long a = -1; a <= 1; ++a) {
      for (long long b = -1; b <= 1; ++b) {
        long long x = k.first + a;
        if (nq) x = ((x % nq) + nq) % nq;
        auto r = grid.equal_range({x, k.second + b});
        for (auto it = r.first; it != r.second; ++it) cand.push_back(it->second);
      }
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (std::size_t j : cand) {
      const PhasePoint s0 = detail::unfold(m, S.points[j], u0.q);
      const PhasePoint s1 = detail::unfold(m, S.points[j + 1], s0.q);
      const auto c = detail::seg_cross(u0, u1, s0, s1);
      if (!c) continue;
      const double uu = U.params[i] + c->first * (U.params[i + 1] - U.params[i]);
      const double ss = S.params[j] + c->second * (S.params[j + 1] - S.params[j]);
      auto h = refine_crossing(Upar, Spar, uu, ss, U.params[i + 1] - U.params[i],
                               S.params[j + 1] - S.params[j]);
      if (!h) continue;
      h->u_index = i;
      h->s_index = j;
      h->near_tangent = h->crossing_angle < tangent_angle;
      h->location = {P > 0.0 ? wrap_period(h->location.q, P) : h->location.q, h->location.p};
      bool dup = false;
      for (const auto& o : out) {
        if (std::abs(o.u - h->u) < 1e-9 && std::abs(o.s - h->s) < 1e-9) dup = true;
      }
      if (!dup) out.push_back(*h);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const HomoclinicPoint& a, const HomoclinicPoint& b) { return a.u < b.u; });
  return out;
}

// ---------------------------------------------------------------------------------------
// Action differences

struct ActionDifference {
  double delta_w = 0.0;
  std::size_t steps = 0;        // chain length used
  double tail_bound = 0.0;      // size of the last increments at both chain ends
  bool converged = true;
};

/// MacKay-Meiss-Percival action difference between the homoclinic orbit through h and the
/// periodic orbit: sum over the homoclinic chain of (step action - orbit step action).
/// The chain runs from the U seed (near the orbit) through h to the S seed.
inline ActionDifference mmp_action_difference(const ManifoldParam& U, const ManifoldParam& S,
                                              const HomoclinicPoint& h, double orbit_action,
                                              std::size_t orbit_period, double tol = 1e-12,
                                              std::size_t max_steps = 200) {
  const MapSystem& m = U.map();
  const double per_step = orbit_action / static_cast<double>(orbit_period);
  std::vector<double> au, as;
  U.chain(h.u, &au);
  S.chain(h.s, &as);
  ActionDifference r;
  double sum = 0.0;
  for (double a : au) sum += a - per_step;
  for (double a : as) sum += a - per_step;
  r.steps = au.size() + as.size();
  // Extend both ends in the linear regime until increments drop below tol.
  PhasePoint back = U.seed(h.u - std::floor(h.u));
  PhasePoint fwd = S.seed(h.s - std::floor(h.s));
  double last = std::abs(sum);
  for (std::size_t k = 0; k < max_steps; ++k) {
    const StepResult rb = step_back(m, back);
    const StepResult rf = step(m, fwd);
    const double inc = (rb.action - per_step) + (rf.action - per_step);
    sum += inc;
    back = rb.next;
    fwd = rf.next;
    r.steps += 2;
    last = std::abs(inc);
    if (last < tol) break;
    // Once the chain ends have been pushed deep into the linear regime they drift off
    // along the other branch; stop before that happens.
    if (k > 2 * orbit_period) break;
  }
  r.tail_bound = last;
  r.converged = last < 1e-9;
  r.delta_w = sum;
  if (!r.converged) {
    throw Error(ErrorKind::non_convergence,
                "action difference increments did not fall below tolerance");
  }
  return r;
}

// ---------------------------------------------------------------------------------------
// Areas

/// Signed area  oint p dq  of a closed polyline circuit (trapezoid rule).
inline double circuit_area(const std::vector<PhasePoint>& circuit, double close_tol = 1e-6) {
  if (circuit.size() < 2) return 0.0;
  if (distance(circuit.front(), circuit.back()) > close_tol) {
    throw Error(ErrorKind::open_circuit, "circuit endpoints differ by " +
                                             std::to_string(distance(circuit.front(), circuit.back())));
  }
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < circuit.size(); ++i) {
    a += 0.5 * (circuit[i].p + circuit[i + 1].p) * (circuit[i + 1].q - circuit[i].q);
  }
  return a;
}

/// Portion of a manifold polyline from its base up to parameter u (inclusive), with the
/// endpoint replaced by `end` unfolded to be continuous.
inline std::vector<PhasePoint> polyline_to(const MapSystem& m, const ManifoldSegment& seg,
                                           double u, const PhasePoint& end) {
  std::vector<PhasePoint> out;
  for (std::size_t i = 0; i < seg.points.size() && seg.params[i] < u; ++i) {
    out.push_back(seg.points[i]);
  }
  out.push_back(detail::unfold(m, end, out.back().q));
  return out;
}

/// Area between an unstable branch from its base to h and a stable branch from h back to
/// its base, closed by the straight segment between the two bases (unfolded chart).
inline double area_between_manifolds(const MapSystem& m, const ManifoldSegment& U,
                                     const ManifoldSegment& S, const HomoclinicPoint& h) {
  std::vector<PhasePoint> c = polyline_to(m, U, h.u, h.location);
  std::vector<PhasePoint> s = polyline_to(m, S, h.s, h.location);
  // Shift the S piece so its endpoint coincides with the U endpoint in the unfolded chart.
  const double shift = c.back().q - s.back().q;
  for (auto it = s.rbegin() + 1; it != s.rend(); ++it) c.push_back({it->q + shift, it->p});
  c.push_back(c.front());
  return circuit_area(c);
}

/// Area of the lobe between two crossings h1, h2 of the same pair of branches: U from h1 to
/// h2, then S from h2 back to h1.
inline double lobe_area(const MapSystem& m, const ManifoldSegment& U, const ManifoldSegment& S,
                        const HomoclinicPoint& h1, const HomoclinicPoint& h2) {
  std::vector<PhasePoint> c{h1.location};
  for (std::size_t i = 0; i < U.points.size(); ++i) {
    if (U.params[i] > h1.u && U.params[i] < h2.u) {
      c.push_back(detail::unfold(m, U.points[i], c.back().q));
    }
  }
  c.push_back(detail::unfold(m, h2.location, c.back().q));
  const double lo = std::min(h1.s, h2.s), hi = std::max(h1.s, h2.s);
  std::vector<PhasePoint> sp;
  for (std::size_t i = 0; i < S.points.size(); ++i) {
    if (S.params[i] > lo && S.params[i] < hi) sp.push_back(S.points[i]);
  }
  if (h2.s > h1.s) std::reverse(sp.begin(), sp.end());
  for (const auto& x : sp) c.push_back(detail::unfold(m, x, c.back().q));
  c.push_back(detail::unfold(m, h1.location, c.back().q));
  if (std::abs(c.back().q - c.front().q) > 1e-9 || std::abs(c.back().p - c.front().p) > 1e-9) {
    throw Error(ErrorKind::open_circuit, "lobe does not close in the unfolded chart");
  }
  c.back() = c.front();
  return circuit_area(c);
}

// ---------------------------------------------------------------------------------------
// Cycle-expansion curvature corrections and Sieber-Richter pairs

/// Stadium itinerary split into per-bounce tokens.
inline std::vector<std::string> itinerary_tokens(const std::string& it) {
  std::vector<std::string> out;
  for (char c : it) {
    if (c == '+' || c == '-') {
      out.back() += c;
    } else {
      out.emplace_back(1, c);
    }
  }
  return out;
}

inline bool cyclic_equal(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() != b.size()) return false;
  const std::size_t n = a.size();
  for (std::size_t r = 0; r < n; ++r) {
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) ok = a[(k + r) % n] == b[k];
    if (ok) return true;
  }
  return false;
}

struct CurvatureCorrection {
  double delta_w = 0.0;   // W12 - W1 - W2
  double det1 = 0.0, det2 = 0.0, det12 = 0.0;  // det(M - 1)
  double det_ratio = 0.0;  // det12 / (det1 det2)
  double relative_defect = 0.0;  // -delta_w / (W1 + W2)
};

inline CurvatureCorrection curvature_correction(const PeriodicOrbit& o1, const PeriodicOrbit& o2,
                                                const PeriodicOrbit& shadow) {
  if (shadow.period != o1.period + o2.period) {
    throw Error(ErrorKind::itinerary_mismatch, "shadow period is not the sum of the periods");
  }
  const auto t1 = itinerary_tokens(o1.itinerary), t2 = itinerary_tokens(o2.itinerary);
  const auto ts = itinerary_tokens(shadow.itinerary);
  bool match = false;
  for (std::size_t r1 = 0; r1 < t1.size() && !match; ++r1) {
    for (std::size_t r2 = 0; r2 < t2.size() && !match; ++r2) {
      std::vector<std::string> cat;
      for (std::size_t k = 0; k < t1.size(); ++k) cat.push_back(t1[(k + r1) % t1.size()]);
      for (std::size_t k = 0; k < t2.size(); ++k) cat.push_back(t2[(k + r2) % t2.size()]);
      match = cyclic_equal(cat, ts);
    }
  }
  if (!match) {
    throw Error(ErrorKind::itinerary_mismatch,
                shadow.itinerary + " is not " + o1.itinerary + " followed by " + o2.itinerary);
  }
  CurvatureCorrection c;
  c.delta_w = shadow.action - o1.action - o2.action;
  c.det1 = det_m_minus_one(o1.monodromy.M);
  c.det2 = det_m_minus_one(o2.monodromy.M);
  c.det12 = det_m_minus_one(shadow.monodromy.M);
  c.det_ratio = c.det12 / (c.det1 * c.det2);
  c.relative_defect = -c.delta_w / (o1.action + o2.action);
  return c;
}

struct SieberRichterPair {
  PeriodicOrbit crossing;
  PeriodicOrbit partner;  // partner as a full n-bounce cycle (may repeat a shorter orbit)
  double partner_action = 0.0;
  double partner_trace = 0.0;
  std::size_t partner_primitive_period = 0;
  double crossing_angle = 0.0;  // angle between the crossing chords, folded into [0, pi/2]
  double delta_w = 0.0;         // W_crossing - W_partner
  double trace_ratio = 0.0;     // Tr M_crossing / Tr M_partner
};

namespace detail {
inline bool chords_cross(Point2 a, Point2 b, Point2 c, Point2 d, double& angle) {
  const double rx = b.x - a.x, ry = b.y - a.y, sx = d.x - c.x, sy = d.y - c.y;
  const double den = rx * sy - ry * sx;
  if (std::abs(den) < 1e-14) return false;
  const double qx = c.x - a.x, qy = c.y - a.y;
  const double t = (qx * sy - qy * sx) / den;
  const double u = (qx * ry - qy * rx) / den;
  constexpr double e = 1e-9;
  if (t <= e || t >= 1 - e || u <= e || u >= 1 - e) return false;
  const double c0 = (rx * sx + ry * sy) / (std::hypot(rx, ry) * std::hypot(sx, sy));
  const double th = std::acos(std::clamp(c0, -1.0, 1.0));
  angle = std::min(th, kPi - th);
  return true;
}
}  // namespace detail

/// Configuration-space self-crossings of a billiard orbit: pairs of chord indices.
inline std::vector<std::pair<std::size_t, std::size_t>> self_crossings(
    const Stadium& s, const std::vector<PhasePoint>& pts, std::vector<double>* angles = nullptr) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = pts.size();
  std::vector<Point2> r(n);
  for (std::size_t k = 0; k < n; ++k) r[k] = s.position(pts[k].q);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      double ang = 0.0;
      if (detail::chords_cross(r[i], r[(i + 1) % n], r[j], r[(j + 1) % n], ang)) {
        out.emplace_back(i, j);
        if (angles) angles->push_back(ang);
      }
    }
  }
  return out;
}

/// For every self-crossing orbit of the census (primitive period n), reconnect the
/// trajectory at each crossing with one loop time-reversed and solve for the partner orbit.
inline std::vector<SieberRichterPair> sieber_richter_scan(const MapSystem& m,
                                                          const FixedPointCensus& census,
                                                          double angle_max = kPi / 2) {
  if (m.kind != MapKind::stadium) throw Error(ErrorKind::unsupported, "stadium only");
  const Stadium s(m.gamma);
  const std::size_t n = census.n;
  std::vector<SieberRichterPair> out;
  for (const auto& A : census.orbits) {
    if (A.period != n) continue;
    std::vector<double> angles;
    const auto xs = self_crossings(s, A.points, &angles);
    for (std::size_t c = 0; c < xs.size(); ++c) {
      if (angles[c] > angle_max) continue;
      const auto [i, j] = xs[c];
      std::vector<double> q;
      for (std::size_t k = i + 1; k <= j; ++k) q.push_back(A.points[k].q);
      for (std::size_t k = 0; k < n - (j - i); ++k) q.push_back(A.points[(i + n - k) % n].q);
      const auto pts = stadium_orbit_from_positions(s, q);
      if (!pts) continue;
      if (orbit_contains(m, A, pts->front(), 1e-7)) continue;
      SieberRichterPair pr;
      pr.crossing = A;
      pr.crossing_angle = angles[c];
      const Propagated pp = propagate(m, pts->front(), n);
      pr.partner = make_orbit(m, pts->front(), n);
      pr.partner_primitive_period = pr.partner.period;
      pr.partner_action = pp.action;
      pr.partner_trace = pp.M.trace();
      pr.delta_w = A.action - pp.action;
      pr.trace_ratio = A.monodromy.M.trace() / pr.partner_trace;
      bool dup = false;
      for (const auto& o : out) {
        if (std::abs(o.delta_w - pr.delta_w) < 1e-9 &&
            std::abs(o.crossing.action - A.action) < 1e-9 &&
            std::abs(o.trace_ratio - pr.trace_ratio) < 1e-9) {
          dup = true;
        }
      }
      if (!dup) out.push_back(std::move(pr));
    }
  }
  std::sort(out.begin(), out.end(), [](const SieberRichterPair& a, const SieberRichterPair& b) {
    return a.delta_w < b.delta_w;
  });
  return out;
}

}  // namespace hchaos
