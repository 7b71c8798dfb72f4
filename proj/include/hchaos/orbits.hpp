#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hchaos/core.hpp"
#include "hchaos/dynamics.hpp"
#include "hchaos/stability.hpp"

namespace hchaos {

/// Stadium discrete symmetries acting on Birkhoff coordinates.
enum SymmetryBit : unsigned {
  kTimeReversal = 1u,  // p -> -p (orbit traversed backwards)
  kXReflection = 2u,   // mirror x -> -x
  kYReflection = 4u,   // mirror y -> -y
};

struct PeriodicOrbit {
  std::vector<PhasePoint> points;  // one primitive period
  std::size_t period = 0;
  double action = 0.0;
  StabilityMatrix monodromy;
  StabilityClass stability;
  unsigned symmetry_class = 0;  // bitmask of group elements (see symmetry_element) fixing the orbit
  std::size_t multiplicity = 1;
  std::string itinerary;
};

struct CensusStats {
  std::size_t seeds = 0;
  std::size_t converged = 0;
  std::size_t failed = 0;
};

struct FixedPointCensus {
  std::size_t n = 0;
  std::vector<PeriodicOrbit> orbits;  // primitive periods dividing n
  std::size_t excluded_marginal = 0;  // fixed points of T^n in parabolic families
  std::vector<PeriodicOrbit> marginal;
  CensusStats stats;

  /// Number of distinct fixed points of T^n represented by the census.
  std::size_t fixed_point_count() const {
    std::size_t c = 0;
    for (const auto& o : orbits) c += o.period;
    return c;
  }
};

// ---------------------------------------------------------------------------------------
// Stadium symmetry group: 8 elements = {id, R} x {id, Mx, My, MxMy}. Element index bits are
// the SymmetryBit values.

inline PhasePoint apply_symmetry(const Stadium& s, unsigned g, const PhasePoint& x) {
  const double P = s.perimeter();
  PhasePoint y = x;
  if (g & kXReflection) y = {wrap_period(s.q_left_apex() - y.q, P), -y.p};
  if (g & kYReflection) y = {wrap_period(-y.q, P), -y.p};
  if (g & kTimeReversal) y.p = -y.p;
  return y;
}

/// Stadium itinerary symbols per bounce: piece letter, plus the advance sense ('+' along
/// increasing q, '-' against) on semicircles.
inline std::string stadium_symbol(const Stadium& s, const PhasePoint& x) {
  const Piece pc = s.piece_of(x.q);
  std::string out;
  switch (pc) {
    case Piece::right_arc: out = "R"; break;
    case Piece::left_arc: out = "L"; break;
    case Piece::bottom: out = "B"; break;
    case Piece::top: out = "T"; break;
  }
  if (is_arc(pc)) out += x.p >= 0.0 ? "+" : "-";
  return out;
}

inline std::string stadium_itinerary(const Stadium& s, const std::vector<PhasePoint>& pts) {
  std::string out;
  for (const auto& x : pts) out += stadium_symbol(s, x);
  return out;
}

// ---------------------------------------------------------------------------------------

struct NewtonOptions {
  std::size_t max_iter = 50;
  double tol = 1e-12;
  double max_step = 0.5;
};

/// Newton iteration on F(x) = T^n(x) - x (chart-aware). Returns the converged point.
inline std::optional<PhasePoint> newton_periodic(const MapSystem& m, PhasePoint x, std::size_t n,
                                                 const NewtonOptions& opt = {}) {
  const double Pq = q_period(m);
  for (std::size_t it = 0; it < opt.max_iter; ++it) {
    Propagated pr;
    try {
      pr = propagate(m, x, n);
    } catch (const Error&) {
      return std::nullopt;
    }
    const PhasePoint F = chart_diff(m, pr.end, x);
    const double res = std::max(std::abs(F.q), std::abs(F.p));
    if (!std::isfinite(res)) return std::nullopt;
    // (M - 1) in (p, q) order acting on (dp, dq).
    const RMat2 J = pr.M - RMat2::identity();
    const double d = J.det();
    if (!std::isfinite(d)) return std::nullopt;
    const double jn = std::abs(J.m11) + std::abs(J.m12) + std::abs(J.m21) + std::abs(J.m22);
    Vec2<double> dx;
    if (std::abs(d) > 1e-10 * jn * jn) {
      dx = J.inverse() * Vec2<double>{-F.p, -F.q};
    } else {
      // Marginal direction (parabolic family): minimum-norm least-squares step.
      const RMat2 JtJ = J.transpose() * J;
      const double tr = JtJ.trace();
      if (tr == 0.0) return res < opt.tol ? std::optional<PhasePoint>(x) : std::nullopt;
      dx = J.transpose() * Vec2<double>{-F.p, -F.q} * (1.0 / tr);
    }
    const double sz = std::max(std::abs(dx.a), std::abs(dx.b));
    if (res < opt.tol && sz < opt.tol) return x;
    if (sz > opt.max_step) dx = dx * (opt.max_step / sz);
    x.p += dx.a;
    x.q += dx.b;
    if (Pq > 0.0) x.q = wrap_period(x.q, Pq);
    if (p_period(m) > 0.0) x.p = wrap01(x.p);
    if (m.kind == MapKind::stadium && !(std::abs(x.p) < 1.0)) return std::nullopt;
  }
  // Accept if the final residual is small even though the step did not settle.
  try {
    const Propagated pr = propagate(m, x, n);
    const PhasePoint F = chart_diff(m, pr.end, x);
    if (std::max(std::abs(F.q), std::abs(F.p)) < 10.0 * opt.tol) return x;
  } catch (const Error&) {
  }
  return std::nullopt;
}

/// Build a PeriodicOrbit from a fixed point of T^n, reducing to the primitive period.
inline PeriodicOrbit make_orbit(const MapSystem& m, const PhasePoint& x, std::size_t n,
                                double same_tol = 1e-8) {
  PeriodicOrbit o;
  std::vector<PhasePoint> pts{x};
  PhasePoint cur = x;
  for (std::size_t i = 1; i < n; ++i) {
    cur = step(m, cur).next;
    if (chart_distance(m, cur, x) < same_tol) break;
    pts.push_back(cur);
  }
  o.period = pts.size();
  o.points = pts;
  const Propagated pr = propagate(m, x, o.period);
  o.action = pr.action;
  o.monodromy = {pr.M, static_cast<double>(o.period)};
  o.stability = classify(o.monodromy, 1e-6);
  if (m.kind == MapKind::stadium) {
    const Stadium s(m.gamma);
    o.itinerary = stadium_itinerary(s, o.points);
  }
  return o;
}

inline double orbit_action(const PeriodicOrbit& o, const MapSystem& m) {
  double w = 0.0;
  for (const auto& x : o.points) w += step(m, x).action;
  return w;
}

/// True if `x` coincides with one of the orbit's points.
inline bool orbit_contains(const MapSystem& m, const PeriodicOrbit& o, const PhasePoint& x,
                           double tol = 1e-8) {
  for (const auto& y : o.points) {
    if (chart_distance(m, x, y) < tol) return true;
  }
  return false;
}

/// Stabilizer of a stadium orbit inside the 8-element group, as a bitmask over elements
/// (bit g set when element g maps the orbit onto itself), and the number of copies.
inline std::pair<unsigned, std::size_t> symmetry_classify(const MapSystem& m,
                                                          const PeriodicOrbit& o,
                                                          double tol = 1e-8) {
  if (m.kind != MapKind::stadium) throw Error(ErrorKind::unsupported, "stadium symmetries only");
  const Stadium s(m.gamma);
  unsigned mask = 1u;  // identity
  std::size_t order = 1;
  for (unsigned g = 1; g < 8; ++g) {
    const PhasePoint y = apply_symmetry(s, g, o.points.front());
    if (orbit_contains(m, o, y, tol)) {
      mask |= 1u << g;
      ++order;
    }
  }
  return {mask, 8 / order};
}

/// Names of the nontrivial stabilizer generators: subset of {T, X, Y} meaning time reversal,
/// x-reflection and y-reflection act on the orbit (possibly combined with time reversal).
inline std::string symmetry_label(unsigned mask) {
  std::string out;
  if (mask & (1u << kTimeReversal)) out += "T";
  if (mask & ((1u << kXReflection) | (1u << (kXReflection | kTimeReversal)))) out += "X";
  if (mask & ((1u << kYReflection) | (1u << (kYReflection | kTimeReversal)))) out += "Y";
  return out.empty() ? "-" : out;
}

struct CensusOptions {
  std::size_t grid_q = 400;
  std::size_t grid_p = 400;
  std::vector<PhasePoint> extra_seeds;
  bool grid = true;
  double dedup_tol = 1e-8;
  double marginal_tol = 1e-6;
  NewtonOptions newton;
  bool complete_symmetry = true;  // stadium: add missing images under the symmetry group
  unsigned threads = 0;           // 0 selects hardware concurrency
};

/// Seed grid over the map's chart.
inline std::vector<PhasePoint> census_seeds(const MapSystem& m, const CensusOptions& opt) {
  std::vector<PhasePoint> seeds;
  if (opt.grid) {
    double q0 = 0.0, q1 = 1.0, p0 = 0.0, p1 = 1.0;
    if (m.kind == MapKind::stadium) {
      q1 = Stadium(m.gamma).perimeter();
      p0 = -1.0;
    } else if (m.kind == MapKind::standard && m.chart == Chart::cylinder) {
      p0 = -0.5;
      p1 = 0.5;
    }
    seeds.reserve(opt.grid_q * opt.grid_p);
    for (std::size_t i = 0; i < opt.grid_q; ++i) {
      for (std::size_t j = 0; j < opt.grid_p; ++j) {
        seeds.push_back({q0 + (q1 - q0) * (i + 0.5) / opt.grid_q,
                         p0 + (p1 - p0) * (j + 0.5) / opt.grid_p});
      }
    }
  }
  seeds.insert(seeds.end(), opt.extra_seeds.begin(), opt.extra_seeds.end());
  return seeds;
}

inline FixedPointCensus find_periodic_orbits(const MapSystem& m, std::size_t n,
                                             const CensusOptions& opt = {}) {
  if (n < 1) throw Error(ErrorKind::invalid_input, "period must be >= 1");
  if (!m.is_map()) throw Error(ErrorKind::unsupported, "census needs a discrete map");
  const std::vector<PhasePoint> seeds = census_seeds(m, opt);
  FixedPointCensus census;
  census.n = n;
  census.stats.seeds = seeds.size();

  std::vector<std::optional<PhasePoint>> roots(seeds.size());
  unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  nt = std::min<unsigned>(nt, std::max<std::size_t>(1, seeds.size() / 64));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < seeds.size(); i += nt) roots[i] = newton_periodic(m, seeds[i], n, opt.newton);
  };
  if (nt <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nt; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  // Deterministic merge: sort roots lexicographically, then deduplicate orbit-wise.
  std::vector<PhasePoint> found;
  for (const auto& r : roots) {
    if (r) {
      ++census.stats.converged;
      found.push_back(*r);
    } else {
      ++census.stats.failed;
    }
  }
  std::sort(found.begin(), found.end(), [](const PhasePoint& a, const PhasePoint& b) {
    return a.q != b.q ? a.q < b.q : a.p < b.p;
  });

  // Spatial hash on all known orbit points.
  const double cell = 1e-6;
  std::multimap<std::pair<long long, long long>, std::size_t> index;
  const double Pq = q_period(m);
  auto key = [&](const PhasePoint& x) {
    const double q = Pq > 0.0 ? wrap_period(x.q, Pq) : x.q;
    return std::make_pair(static_cast<long long>(std::floor(q / cell)),
                          static_cast<long long>(std::floor(x.p / cell)));
  };
  std::vector<PeriodicOrbit> all;
  const long long nq = Pq > 0.0 ? static_cast<long long>(std::ceil(Pq / cell)) : 0;
  auto known = [&](const PhasePoint& x) {
    const auto k = key(x);
    for (long long a = -1; a <= 1; ++a) {
      long long kq = k.first + a;
      if (nq > 0) kq = ((kq % nq) + nq) % nq;
      for (long long b = -1; b <= 1; ++b) {
        auto range = index.equal_range({kq, k.second + b});
        for (auto it = range.first; it != range.second; ++it) {
          if (orbit_contains(m, all[it->second], x, opt.dedup_tol)) return true;
        }
      }
    }
    return false;
  };
  auto admit = [&](const PhasePoint& x) {
    if (known(x)) return;
    PeriodicOrbit o = make_orbit(m, x, n, opt.dedup_tol);
    if (n % o.period != 0) return;  // spurious near-closure
    // Re-verify closure on the polished point.
    const Propagated pr = propagate(m, o.points.front(), o.period);
    if (chart_distance(m, pr.end, o.points.front()) > 1e-10) return;
    const std::size_t id = all.size();
    for (const auto& y : o.points) index.insert({key(y), id});
    all.push_back(std::move(o));
  };
  for (const auto& x : found) admit(x);
  if (m.kind == MapKind::stadium && opt.complete_symmetry) {
    const Stadium s(m.gamma);
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (unsigned g = 1; g < 8; ++g) {
        const PhasePoint y = apply_symmetry(s, g, all[i].points.front());
        if (known(y)) continue;
        if (const auto r = newton_periodic(m, y, n, opt.newton)) admit(*r);
      }
    }
  }
  for (auto& o : all) {
    if (m.kind == MapKind::stadium) {
      const auto [mask, mult] = symmetry_classify(m, o);
      o.symmetry_class = mask;
      o.multiplicity = mult;
    }
    const double trn = propagate(m, o.points.front(), n).M.trace();
    const double trp = o.monodromy.M.trace();
    if (std::abs(std::abs(trn) - 2.0) < opt.marginal_tol ||
        std::abs(std::abs(trp) - 2.0) < opt.marginal_tol) {
      census.excluded_marginal += o.period;
      census.marginal.push_back(std::move(o));
    } else {
      census.orbits.push_back(std::move(o));
    }
  }
  return census;
}

// ---------------------------------------------------------------------------------------
// Uniformity sum

struct UniformityResult {
  std::vector<double> per_cell;
  std::vector<std::size_t> points_per_cell;
  double total = 0.0;
  std::size_t singular = 0;  // fixed points dropped for near-zero det(M_n - 1)
};

/// F_n(cell) = sum over fixed points of T^n in the cell of 1 / |det(M_n - 1)|.
inline UniformityResult uniformity_sum(const MapSystem& m, const FixedPointCensus& census,
                                       const std::function<int(const PhasePoint&)>& cell_of,
                                       std::size_t n_cells, double singular_tol = 1e-6) {
  UniformityResult r;
  r.per_cell.assign(n_cells, 0.0);
  r.points_per_cell.assign(n_cells, 0);
  for (const auto& o : census.orbits) {
    for (const auto& x : o.points) {
      const RMat2 Mn = propagate(m, x, census.n).M;
      const double d = det_m_minus_one(Mn);
      if (std::abs(d) < singular_tol) {
        ++r.singular;
        continue;
      }
      const int c = cell_of(x);
      if (c < 0 || static_cast<std::size_t>(c) >= n_cells) continue;
      r.per_cell[c] += 1.0 / std::abs(d);
      r.points_per_cell[c] += 1;
      r.total += 1.0 / std::abs(d);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------------------
// Billiard orbits as stationary points of the total chord length.

namespace detail {
/// Solve A x = b for a small dense system by partial-pivot Gaussian elimination.
inline bool solve_dense(std::vector<double> A, std::vector<double> b, std::size_t n,
                        std::vector<double>& x) {
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(A[r * n + c]) > std::abs(A[piv * n + c])) piv = r;
    }
    if (A[piv * n + c] == 0.0) return false;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(A[c * n + k], A[piv * n + k]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = A[r * n + c] / A[c * n + c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) A[r * n + k] -= f * A[c * n + k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double v = b[r];
    for (std::size_t k = r + 1; k < n; ++k) v -= A[r * n + k] * x[k];
    x[r] = v / A[r * n + r];
  }
  return true;
}

/// Gradient of the closed-polygon length sum_k l(q_k, q_{k+1}).
inline std::vector<double> length_gradient(const Stadium& s, const std::vector<double>& q) {
  const std::size_t n = q.size();
  std::vector<BoundaryFrame> f(n);
  for (std::size_t k = 0; k < n; ++k) f[k] = s.frame(q[k]);
  std::vector<double> g(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = (k + 1) % n;
    const double dx = f[j].pos.x - f[k].pos.x, dy = f[j].pos.y - f[k].pos.y;
    const double l = std::hypot(dx, dy);
    if (l == 0.0) return std::vector<double>(n, std::numeric_limits<double>::quiet_NaN());
    g[k] -= (f[k].tangent.x * dx + f[k].tangent.y * dy) / l;
    g[j] += (f[j].tangent.x * dx + f[j].tangent.y * dy) / l;
  }
  return g;
}
}  // namespace detail

/// Periodic billiard orbit with a prescribed cyclic order of bounce positions, found by
/// Newton iteration on the gradient of the total length. Returns the orbit's Birkhoff
/// points (one full cycle of q.size() bounces, possibly a repeated shorter orbit).
inline std::optional<std::vector<PhasePoint>> stadium_orbit_from_positions(
    const Stadium& s, std::vector<double> q, double tol = 1e-13, std::size_t max_iter = 60) {
  const std::size_t n = q.size();
  if (n < 2) return std::nullopt;
  const double P = s.perimeter();
  for (std::size_t it = 0; it < max_iter; ++it) {
    const std::vector<double> g = detail::length_gradient(s, q);
    double gn = 0.0;
    for (double v : g) gn = std::max(gn, std::abs(v));
    if (!std::isfinite(gn)) return std::nullopt;
    if (gn < tol) break;
    std::vector<double> H(n * n);
    const double h = 1e-7;
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<double> qp = q, qm = q;
      qp[c] += h;
      qm[c] -= h;
      const auto gp = detail::length_gradient(s, qp), gm = detail::length_gradient(s, qm);
      for (std::size_t r = 0; r < n; ++r) H[r * n + c] = (gp[r] - gm[r]) / (2 * h);
    }
    std::vector<double> dq;
    std::vector<double> rhs(n);
    for (std::size_t r = 0; r < n; ++r) rhs[r] = -g[r];
    if (!detail::solve_dense(H, rhs, n, dq)) return std::nullopt;
    double mx = 0.0;
    for (double v : dq) mx = std::max(mx, std::abs(v));
    const double sc = mx > 0.3 ? 0.3 / mx : 1.0;
    for (std::size_t k = 0; k < n; ++k) q[k] = wrap_period(q[k] + sc * dq[k], P);
    if (it + 1 == max_iter) return std::nullopt;
  }
  std::vector<PhasePoint> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const BoundaryFrame a = s.frame(q[k]), b = s.frame(q[(k + 1) % n]);
    const double dx = b.pos.x - a.pos.x, dy = b.pos.y - a.pos.y;
    const double l = std::hypot(dx, dy);
    pts[k] = {q[k], (a.tangent.x * dx + a.tangent.y * dy) / l};
  }
  // The polygon must be an actual billiard orbit.
  for (std::size_t k = 0; k < n; ++k) {
    try {
      const PhasePoint nx = s.bounce(pts[k]).next;
      if (std::abs(periodic_diff(nx.q, pts[(k + 1) % n].q, P)) > 1e-9 ||
          std::abs(nx.p - pts[(k + 1) % n].p) > 1e-9) {
        return std::nullopt;
      }
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return pts;
}

}  // namespace hchaos
