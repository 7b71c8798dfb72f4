#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "hchaos/core.hpp"
#include "hchaos/dynamics.hpp"
#include "hchaos/stability.hpp"

namespace hchaos {

struct PortraitOrbit {
  PhasePoint seed;
  std::vector<PhasePoint> points;  // p unwrapped on the cylinder
  double lyapunov = 0.0;           // finite-time exponent per step
};

struct PortraitOptions {
  std::size_t seeds = 50;
  std::size_t iterations = 2000;
  std::uint64_t seed = 1;
};

/// Standard-map orbits from pseudo-random seeds in the unit square, iterated on the cylinder.
inline std::vector<PortraitOrbit> standard_map_portrait(double K, const PortraitOptions& opt = {}) {
  const MapSystem m = MapSystem::standard_map(K, Chart::cylinder);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<PortraitOrbit> out;
  for (std::size_t s = 0; s < opt.seeds; ++s) {
    PortraitOrbit o;
    o.seed = {u(rng), u(rng) - 0.5};
    PhasePoint x = o.seed;
    // tangent vector renormalized every step
    double vq = 1.0, vp = 0.0, sum = 0.0;
    o.points.reserve(opt.iterations);
    for (std::size_t k = 0; k < opt.iterations; ++k) {
      const StepResult r = step(m, x);
      const RMat2& J = r.jacobian;  // (p, q) order
      const double np = J.m11 * vp + J.m12 * vq;
      const double nq = J.m21 * vp + J.m22 * vq;
      const double len = std::hypot(np, nq);
      sum += std::log(len);
      vp = np / len;
      vq = nq / len;
      x = r.next;
      o.points.push_back(x);
    }
    o.lyapunov = sum / static_cast<double>(opt.iterations);
    out.push_back(std::move(o));
  }
  return out;
}

/// Fraction of q bins visited and total p excursion of one orbit.
struct OrbitSpan {
  double q_coverage = 0.0;
  double p_variation = 0.0;
};

inline OrbitSpan orbit_span(const std::vector<PhasePoint>& pts, std::size_t bins = 100) {
  std::vector<char> hit(bins, 0);
  double lo = pts.empty() ? 0.0 : pts.front().p, hi = lo;
  for (const auto& x : pts) {
    const auto b = std::min(bins - 1, static_cast<std::size_t>(wrap01(x.q) * bins));
    hit[b] = 1;
    lo = std::min(lo, x.p);
    hi = std::max(hi, x.p);
  }
  OrbitSpan s;
  s.q_coverage = static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / bins;
  s.p_variation = hi - lo;
  return s;
}

/// An orbit behaves like a rotational invariant curve when it visits every q bin while its
/// momentum stays inside a band narrower than max_p_variation.
inline bool spans_rotational(const PortraitOrbit& o, double max_p_variation = 0.5,
                             std::size_t bins = 100) {
  const OrbitSpan s = orbit_span(o.points, bins);
  return s.q_coverage >= 1.0 && s.p_variation < max_p_variation;
}

struct StickinessReport {
  double median_density = 0.0;
  double max_density = 0.0;
  double excess = 0.0;  // max / median over cells visited by chaotic orbits
  std::size_t chaotic_orbits = 0;
};

/// Point-density excess of the chaotic orbits on a torus grid.
inline StickinessReport sticky_excess(const std::vector<PortraitOrbit>& orbits,
                                      double lyapunov_floor = 0.02, std::size_t grid = 40) {
  std::vector<double> cells(grid * grid, 0.0);
  StickinessReport r;
  for (const auto& o : orbits) {
    if (o.lyapunov < lyapunov_floor) continue;
    ++r.chaotic_orbits;
    for (const auto& x : o.points) {
      const auto i = std::min(grid - 1, static_cast<std::size_t>(wrap01(x.q) * grid));
      const auto j = std::min(grid - 1, static_cast<std::size_t>(wrap01(x.p) * grid));
      cells[i * grid + j] += 1.0;
    }
  }
  std::vector<double> visited;
  for (double c : cells) {
    if (c > 0.0) visited.push_back(c);
  }
  if (visited.empty()) return r;
  std::sort(visited.begin(), visited.end());
  r.median_density = visited[visited.size() / 2];
  r.max_density = visited.back();
  r.excess = r.max_density / r.median_density;
  return r;
}

}  // namespace hchaos
