#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "hchaos/core.hpp"
#include "hchaos/dynamics.hpp"
#include "hchaos/orbits.hpp"
#include "hchaos/stadium.hpp"
#include "hchaos/symbolic.hpp"
#include "hchaos/tangle.hpp"

namespace hchaos {

/// Stadium deformation: the semicircles move outward by delta along x, radius stays 1.
struct PerturbationSpec {
  double base_value = 1.0;
  double delta = 0.0;

  double target() const { return base_value + delta; }
};

/// Outward wall displacement per unit delta at chart point q.
inline double normal_displacement(const Stadium& s, double q) {
  const BoundaryFrame f = s.frame(q);
  return is_arc(f.piece) ? std::abs(f.normal.x) : 0.0;
}

/// Same geometric point on a stadium with another gamma: arcs keep their angle, edges keep
/// their fractional position.
inline double transfer_chart(const Stadium& from, const Stadium& to, double q) {
  q = wrap_period(q, from.perimeter());
  const double g0 = from.gamma(), g1 = to.gamma();
  const double h = 0.5 * kPi;
  if (q < h) return q;
  if (q < h + 2.0 * g0) return h + (q - h) * g1 / g0;
  if (q < 3.0 * h + 2.0 * g0) return q + 2.0 * (g1 - g0);
  if (q < 3.0 * h + 4.0 * g0) return 3.0 * h + 2.0 * g1 + (q - 3.0 * h - 2.0 * g0) * g1 / g0;
  return q + 4.0 * (g1 - g0);
}

inline PeriodicOrbit continue_orbit(const PeriodicOrbit& orbit, const PerturbationSpec& spec,
                                    const NewtonOptions& opt = {}) {
  if (orbit.points.empty()) throw Error(ErrorKind::invalid_input, "empty orbit");
  const Stadium s0(spec.base_value), s1(spec.target());
  const MapSystem m1 = MapSystem::stadium(spec.target());
  const PhasePoint x0 = orbit.points.front();
  const PhasePoint seed{transfer_chart(s0, s1, x0.q), x0.p};
  const auto root = newton_periodic(m1, seed, orbit.period, opt);
  if (!root) {
    throw Error(ErrorKind::non_convergence, "continuation failed (suspected bifurcation)");
  }
  PeriodicOrbit out = make_orbit(m1, *root, orbit.period);
  if (out.period != orbit.period) {
    throw Error(ErrorKind::non_convergence, "continued orbit changed period");
  }
  if (!orbit.itinerary.empty() && !cyclic_equal(itinerary_tokens(orbit.itinerary),
                                                itinerary_tokens(out.itinerary))) {
    throw Error(ErrorKind::itinerary_mismatch,
                "itinerary changed: " + orbit.itinerary + " -> " + out.itinerary);
  }
  const auto sc = symmetry_classify(m1, out);
  out.symmetry_class = sc.first;
  out.multiplicity = sc.second;
  return out;
}

/// First-order action increment of one bounce per unit delta.
inline double bounce_action_rate(const Stadium& s, const PhasePoint& x) {
  const double c = std::sqrt(std::max(0.0, 1.0 - x.p * x.p));
  return 2.0 * normal_displacement(s, x.q) * c;
}

/// Action change along the unperturbed orbit.
inline double first_order_action_change(const PeriodicOrbit& orbit, const PerturbationSpec& spec) {
  const Stadium s(spec.base_value);
  double rate = 0.0;
  for (const auto& x : orbit.points) rate += bounce_action_rate(s, x);
  return rate * spec.delta;
}

struct DiffusionOptions {
  std::size_t ensemble = 10000;
  std::size_t steps = 200;
  std::uint64_t seed = 12345;
  double fit_from = 10.0;
  double fit_to = 200.0;
  double ball_band = 0.05;  // |p| excluded at edge starts
  unsigned threads = 0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 0.0;
};

inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  if (x.size() < 3 || x.size() != y.size()) throw Error(ErrorKind::invalid_input, "fit needs >= 3 points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    sse += r * r;
  }
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  f.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx);
  return f;
}

struct DiffusionReport {
  double epsilon = 0.0;
  std::vector<double> t;
  std::vector<double> mean;
  std::vector<double> variance;
  LinearFit fit;
  double K = 0.0;        // slope / (2 eps^2)
  double K_ci = 0.0;     // 95% half width
};

/// Random-walk growth of the accumulated first-order action shift eps * sum dW/dgamma.
inline DiffusionReport action_diffusion(double gamma, double epsilon,
                                        const DiffusionOptions& opt = {}) {
  const Stadium s(gamma);
  const MapSystem m = MapSystem::stadium(gamma);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uq(0.0, s.perimeter()), up(-1.0, 1.0);
  std::vector<PhasePoint> starts;
  starts.reserve(opt.ensemble);
  while (starts.size() < opt.ensemble) {
    const PhasePoint x{uq(rng), up(rng)};
    if (std::abs(x.p) > 0.999) continue;
    if (!is_arc(s.piece_of(x.q)) && std::abs(x.p) < opt.ball_band) continue;
    starts.push_back(x);
  }
  const std::size_t T = opt.steps;
  std::vector<double> acc(opt.ensemble * T, 0.0);
  std::vector<char> ok(opt.ensemble, 1);
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      PhasePoint x = starts[i];
      double w = 0.0;
      try {
        for (std::size_t k = 0; k < T; ++k) {
          w += epsilon * bounce_action_rate(s, x);
          acc[i * T + k] = w;
          x = step(m, x).next;
        }
      } catch (const Error&) {
        ok[i] = 0;
      }
    }
  };
  unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  nt = static_cast<unsigned>(std::min<std::size_t>(nt, opt.ensemble));
  std::vector<std::thread> pool;
  const std::size_t chunk = (opt.ensemble + nt - 1) / nt;
  for (unsigned w = 0; w < nt; ++w) {
    const std::size_t lo = w * chunk, hi = std::min(opt.ensemble, lo + chunk);
    if (lo < hi) pool.emplace_back(work, lo, hi);
  }
  for (auto& th : pool) th.join();

  DiffusionReport rep;
  rep.epsilon = epsilon;
  std::size_t used = 0;
  for (char c : ok) used += c;
  if (used < 3) throw Error(ErrorKind::non_convergence, "ensemble collapsed");
  for (std::size_t k = 0; k < T; ++k) {
    double sum = 0, sum2 = 0;
    for (std::size_t i = 0; i < opt.ensemble; ++i) {
      if (!ok[i]) continue;
      sum += acc[i * T + k];
    }
    const double mu = sum / used;
    for (std::size_t i = 0; i < opt.ensemble; ++i) {
      if (!ok[i]) continue;
      const double d = acc[i * T + k] - mu;
      sum2 += d * d;
    }
    rep.t.push_back(static_cast<double>(k + 1));
    rep.mean.push_back(mu);
    rep.variance.push_back(sum2 / (used - 1));
  }
  std::vector<double> fx, fy;
  for (std::size_t k = 0; k < T; ++k) {
    if (rep.t[k] >= opt.fit_from && rep.t[k] <= opt.fit_to) {
      fx.push_back(rep.t[k]);
      fy.push_back(rep.variance[k]);
    }
  }
  rep.fit = fit_line(fx, fy);
  const double e2 = epsilon * epsilon;
  rep.K = e2 > 0 ? rep.fit.slope / (2.0 * e2) : 0.0;
  rep.K_ci = e2 > 0 ? 1.96 * rep.fit.slope_stderr / (2.0 * e2) : 0.0;
  return rep;
}

struct StabilityMetric {
  std::vector<double> separation;  // per bounce, chart units
  double max_separation = 0.0;
  double manifold_distance = 0.0;  // one-sided Hausdorff
  double ratio = 0.0;
};

inline double one_sided_hausdorff(const std::vector<PhasePoint>& a,
                                  const std::vector<PhasePoint>& b) {
  double worst = 0.0;
  for (const auto& x : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : b) best = std::min(best, std::hypot(x.q - y.q, x.p - y.p));
    worst = std::max(worst, best);
  }
  return worst;
}

struct StabilityMetricOptions {
  std::size_t bounces = 5;
  double manifold_budget = 2.0;
  double budget_slack = 1.25;  // base portion is grown slightly longer to absorb endpoint drift
};

/// Trajectory divergence versus unstable-manifold displacement of the horizontal orbit.
inline StabilityMetric manifold_stability_metric(double gamma0, double gamma1, const PhasePoint& x0,
                                                 const StabilityMetricOptions& opt = {}) {
  const MapSystem m0 = MapSystem::stadium(gamma0), m1 = MapSystem::stadium(gamma1);
  const double L = Stadium(gamma0).perimeter();
  StabilityMetric r;
  PhasePoint a = x0, b = x0;
  for (std::size_t k = 0; k < opt.bounces; ++k) {
    a = step(m0, a).next;
    b = step(m1, b).next;
    const double d = std::hypot(periodic_diff(a.q, b.q, L), a.p - b.p);
    r.separation.push_back(d);
    r.max_separation = std::max(r.max_separation, d);
  }
  if (gamma0 == gamma1) return r;
  const ManifoldParam p0(m0, {0.0, 0.0}, 2, Branch::unstable, -1, 1e-8);
  const ManifoldParam p1(m1, {0.0, 0.0}, 2, Branch::unstable, -1, 1e-8);
  const ManifoldSegment u0 = grow_manifold(p0, opt.manifold_budget * opt.budget_slack);
  const ManifoldSegment u1 = grow_manifold(p1, opt.manifold_budget);
  r.manifold_distance = one_sided_hausdorff(u1.points, u0.points);
  r.ratio = r.manifold_distance > 0 ? r.max_separation / r.manifold_distance : 0.0;
  return r;
}

// ---------------------------------------------------------------------------------------
// Diamond family born at gamma = 1.

/// Apex and joint-adjacent points of the period-6 diamond orbit.
inline std::vector<Point2> diamond_points(double g) {
  return {{g + 1, 0}, {g, 1}, {-g, -1}, {-g - 1, 0}, {-g, 1}, {g, -1}};
}

struct FamilyMember {
  PeriodicOrbit orbit;
  int joint_arc_bounces = 0;  // of the four joint-adjacent bounces
};

struct BifurcationPoint {
  double gamma = 0.0;
  std::vector<FamilyMember> near_diamond;  // every 6-bounce orbit close to the diamond
  std::size_t family_count = 0;            // members with a balanced arc/edge split
  std::size_t new_cells = 0;               // depth-3 cells gained over gamma = 1
};

struct BifurcationOptions {
  double radius = 0.2;
  CensusOptions census;
  bool with_partitions = false;
  PartitionOptions partition;
};

/// Family members are the near-diamond orbits whose four joint bounces split 4/0, 0/4 or 2/2
/// between arcs and edges.
inline BifurcationPoint bifurcation_point(double gamma, const BifurcationOptions& opt = {}) {
  const MapSystem m = MapSystem::stadium(gamma);
  const Stadium s(gamma);
  const FixedPointCensus c = find_periodic_orbits(m, 6, opt.census);
  const auto targets = diamond_points(gamma);
  BifurcationPoint bp;
  bp.gamma = gamma;
  for (const auto& o : c.orbits) {
    if (o.period != 6) continue;
    bool near = true;
    int arcs = 0;
    for (const auto& x : o.points) {
      const Point2 r = s.position(x.q);
      double best = 1e300;
      std::size_t which = 0;
      for (std::size_t k = 0; k < targets.size(); ++k) {
        const double d = std::hypot(r.x - targets[k].x, r.y - targets[k].y);
        if (d < best) {
          best = d;
          which = k;
        }
      }
      if (best > opt.radius) {
        near = false;
        break;
      }
      if (which % 3 != 0 && is_arc(s.piece_of(x.q))) ++arcs;
    }
    if (!near) continue;
    bp.near_diamond.push_back({o, arcs});
    if (arcs % 2 == 0) ++bp.family_count;
  }
  if (opt.with_partitions) {
    const auto ref = stadium_partition(1.0, 3, opt.partition).count();
    const auto here = stadium_partition(gamma, 3, opt.partition).count();
    bp.new_cells = here > ref ? here - ref : 0;
  }
  return bp;
}

inline std::vector<BifurcationPoint> bifurcation_census(const std::vector<double>& sweep,
                                                        const BifurcationOptions& opt = {}) {
  std::vector<BifurcationPoint> out;
  for (double g : sweep) out.push_back(bifurcation_point(g, opt));
  return out;
}

}  // namespace hchaos
