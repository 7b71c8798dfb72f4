#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "hchaos/core.hpp"
#include "hchaos/dynamics.hpp"
#include "hchaos/linalg.hpp"

namespace hchaos {

/// Stability matrix in (p, q) block order:
/// M11 = dp_t/dp_0, M12 = dp_t/dq_0, M21 = dq_t/dp_0, M22 = dq_t/dq_0.
struct StabilityMatrix {
  RMat2 M = RMat2::identity();
  double steps = 0.0;  // iteration count, or elapsed time for flows
};

enum class StabilityTag { elliptic, parabolic, hyperbolic, hyperbolic_reflection };

inline const char* to_string(StabilityTag t) {
  switch (t) {
    case StabilityTag::elliptic: return "elliptic";
    case StabilityTag::parabolic: return "parabolic";
    case StabilityTag::hyperbolic: return "hyperbolic";
    case StabilityTag::hyperbolic_reflection: return "hyperbolic-with-reflection";
  }
  return "unknown";
}

struct StabilityClass {
  StabilityTag tag = StabilityTag::parabolic;
  double exponent = 0.0;  // per step, from |Tr M| = 2 cosh(mu * steps)
  double trace = 2.0;
  double rotation = 0.0;  // elliptic: rotation angle per step
  double shear = 0.0;     // parabolic: off-diagonal shear of M - 1
};

inline StabilityMatrix propagate_tangent(const MapSystem& m, const TrajectorySegment& seg) {
  if (m.is_flow()) {
    if (seg.tangents.empty()) throw Error(ErrorKind::invalid_input, "flow segment lacks tangents");
    return {seg.tangents.back(), seg.time};
  }
  RMat2 M = RMat2::identity();
  for (std::size_t i = 0; i + 1 < seg.points.size(); ++i) {
    StepResult r;
    try {
      r = step(m, seg.points[i]);
    } catch (const Error& e) {
      throw StepError(e, i);
    }
    const RMat2& J = r.jacobian;
    if (!std::isfinite(J.m11) || !std::isfinite(J.m12) || !std::isfinite(J.m21) ||
        !std::isfinite(J.m22)) {
      throw StepError(Error(ErrorKind::tangency, "non-finite Jacobian"), i);
    }
    M = J * M;
  }
  return {M, static_cast<double>(seg.points.size() - 1)};
}

/// Finite-time stability exponent from the singular values: mu = ln(lambda_max(M M^T)) / (2 steps).
inline double finite_time_exponent(const StabilityMatrix& s) {
  if (s.steps <= 0.0) return 0.0;
  const RMat2 G = s.M * s.M.transpose();
  const SymEigen e = sym_eigen(G.m11, G.m12, G.m22);
  return std::log(e.hi) / (2.0 * s.steps);
}

/// Exponent from the trace: |Tr M| = 2 cosh(mu * steps).
inline double trace_exponent(const StabilityMatrix& s) {
  const double t = std::abs(s.M.trace());
  if (t <= 2.0 || s.steps <= 0.0) return 0.0;
  return std::acosh(0.5 * t) / s.steps;
}

inline StabilityClass classify(const StabilityMatrix& s, double parabolic_tol = 1e-9) {
  StabilityClass c;
  const double tr = s.M.trace();
  c.trace = tr;
  const double at = std::abs(tr);
  if (std::abs(at - 2.0) <= parabolic_tol) {
    c.tag = StabilityTag::parabolic;
    const RMat2 D = s.M - RMat2::identity() * (tr > 0 ? 1.0 : -1.0);
    c.shear = std::abs(D.m12) > std::abs(D.m21) ? D.m12 : D.m21;
  } else if (at < 2.0) {
    c.tag = StabilityTag::elliptic;
    c.rotation = s.steps > 0.0 ? std::acos(0.5 * tr) / s.steps : 0.0;
  } else {
    c.tag = tr > 0.0 ? StabilityTag::hyperbolic : StabilityTag::hyperbolic_reflection;
    c.exponent = trace_exponent(s);
  }
  return c;
}

/// Unit tangent vectors, stored as (dq, dp).
struct ManifoldTangents {
  PhasePoint unstable_end;
  PhasePoint stable_end;
  PhasePoint unstable_start;
  PhasePoint stable_start;
  double lambda = 0.0;  // expanding eigenvalue of M when M maps a point to itself
};

namespace detail {
inline PhasePoint qp_of(const Vec2<double>& pq) {
  // (p, q) ordered vector -> (dq, dp), sign fixed so dq >= 0 (dp > 0 if dq == 0)
  PhasePoint v{pq.b, pq.a};
  if (v.q < 0.0 || (v.q == 0.0 && v.p < 0.0)) v = {-v.q, -v.p};
  const double n = std::hypot(v.q, v.p);
  return {v.q / n, v.p / n};
}
}  // namespace detail

/// Tangents to the unstable and stable manifolds at a fixed point of M: the eigenvectors of
/// the monodromy matrix. See finite_time_tangents for non-periodic segments.
inline ManifoldTangents manifold_tangents(const StabilityMatrix& s) {
  const RMat2& M = s.M;
  const double tr = M.trace();
  if (std::abs(tr) <= 2.0) {
    throw Error(ErrorKind::invalid_input, "manifold tangents need a hyperbolic matrix");
  }
  ManifoldTangents t;
  const double disc = std::sqrt(tr * tr - 4.0);
  const double lu = 0.5 * (tr + (tr > 0 ? disc : -disc));
  const double ls = 1.0 / lu;
  t.lambda = lu;
  t.unstable_end = t.unstable_start = detail::qp_of(eigvec(M, lu));
  t.stable_end = t.stable_start = detail::qp_of(eigvec(M, ls));
  return t;
}

/// Finite-time (non-periodic) manifold directions from singular vectors.
inline ManifoldTangents finite_time_tangents(const StabilityMatrix& s) {
  const RMat2& M = s.M;
  ManifoldTangents t;
  const RMat2 G = M * M.transpose();
  const SymEigen eg = sym_eigen(G.m11, G.m12, G.m22);
  const RMat2 H = M.transpose() * M;
  const SymEigen eh = sym_eigen(H.m11, H.m12, H.m22);
  if (eg.hi <= 1.0 + 1e-12) throw Error(ErrorKind::invalid_input, "no stretching direction");
  t.unstable_end = detail::qp_of(eg.hi_vec);
  t.stable_start = detail::qp_of(eh.lo_vec);
  t.unstable_start = detail::qp_of(M.inverse() * eg.hi_vec);
  t.stable_end = detail::qp_of(M * eh.lo_vec);
  t.lambda = std::sqrt(eg.hi);
  return t;
}

/// Semiclassical determinants for one degree of freedom with scalar shape parameters.
struct Determinants {
  cplx D0, D1, D2;
};

template <typename Mat>
Determinants semiclassical_determinants(const Mat& M, cplx b_alpha, cplx b_beta) {
  const cplx m11 = M.m11, m12 = M.m12, m21 = M.m21, m22 = M.m22;
  const cplx I(0.0, 1.0);
  const cplx bb = std::conj(b_beta);
  Determinants d;
  d.D0 = m21;
  d.D1 = m22 + I * m21 * b_alpha;
  d.D2 = m11 * b_alpha + bb * m22 + I * (bb * m21 * b_alpha - m12);
  return d;
}

/// Standard det(M - 1) = 2 - Tr M for a unit-determinant 2x2 matrix.
inline double det_m_minus_one(const RMat2& M) { return (M - RMat2::identity()).det(); }

/// Times where D0 = M21 changes sign along a sampled trajectory (linear interpolation
/// between samples). The zero of M = 1 at t = 0 is not counted.
inline std::vector<double> caustic_times(const TrajectorySegment& seg) {
  std::vector<double> out;
  double last = 0.0;
  double last_t = 0.0;
  for (std::size_t i = 1; i < seg.tangents.size(); ++i) {
    const double v = seg.tangents[i].m21;
    if (v == 0.0) continue;
    if (last != 0.0 && (v > 0.0) != (last > 0.0)) {
      const double t1 = seg.times[i];
      out.push_back(last_t + (t1 - last_t) * last / (last - v));
    }
    last = v;
    last_t = seg.times[i];
  }
  return out;
}

}  // namespace hchaos
