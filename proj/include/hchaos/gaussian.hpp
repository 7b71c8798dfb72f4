#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "hchaos/core.hpp"
#include "hchaos/dynamics.hpp"
#include "hchaos/linalg.hpp"

namespace hchaos {

/// Gaussian wave packet exp(-b/2 (x-q)^2 + i p x / hbar) with b = c + i d, c > 0.
/// Its Wigner function is exp(-delta^T A delta / hbar) / (pi hbar) with delta in (q, p) order.
struct GaussianState {
  double q = 0.0;
  double p = 0.0;
  cplx b{1.0, 0.0};
  double hbar = 1.0;

  void validate() const {
    if (!(b.real() > 0.0) || !std::isfinite(b.imag()) || !std::isfinite(q) || !std::isfinite(p)) {
      throw Error(ErrorKind::invalid_input, "gaussian needs finite centroid and Re b > 0");
    }
    if (!(hbar > 0.0)) throw Error(ErrorKind::invalid_input, "hbar must be positive");
  }

  /// Wigner matrix in (q, p) order; unit determinant.
  RMat2 wigner_matrix() const {
    const double c = b.real(), d = b.imag();
    return {c + d * d / c, d / c, d / c, 1.0 / c};
  }

  /// Phase-space covariance of the Wigner density.
  RMat2 covariance() const { return wigner_matrix().inverse() * (0.5 * hbar); }

  double wigner(const PhasePoint& x) const {
    const RMat2 A = wigner_matrix();
    const double dq = x.q - q, dp = x.p - p;
    const double e = A.m11 * dq * dq + 2.0 * A.m12 * dq * dp + A.m22 * dp * dp;
    return std::exp(-e / hbar) / (kPi * hbar);
  }
};

inline GaussianState gaussian_from_wigner(const PhasePoint& c, const RMat2& A, double hbar) {
  GaussianState g;
  g.q = c.q;
  g.p = c.p;
  g.hbar = hbar;
  const double cr = 1.0 / A.m22;
  g.b = {cr, A.m12 * cr};
  return g;
}

/// Linear evolution by a (p, q)-ordered stability matrix; the centroid is supplied.
inline GaussianState evolve_gaussian(const GaussianState& s, const RMat2& M,
                                     const PhasePoint& new_centroid) {
  s.validate();
  // (q, p)-ordered copy of M
  const RMat2 L{M.m22, M.m21, M.m12, M.m11};
  const RMat2 Li = L.inverse();
  const RMat2 A = Li.transpose() * s.wigner_matrix() * Li;
  return gaussian_from_wigner(new_centroid, A, s.hbar);
}

/// Centroid follows the map for n steps; the shape follows the linearization around it.
inline GaussianState evolve_gaussian(const MapSystem& m, const GaussianState& s, std::size_t n) {
  const Propagated pr = propagate(m, {s.q, s.p}, n);
  return evolve_gaussian(s, pr.M, pr.end);
}

/// Flow version: centroid integrated for time t.
inline GaussianState evolve_gaussian_flow(const MapSystem& m, const GaussianState& s, double t) {
  const TrajectorySegment seg = integrate_flow(m, {s.q, s.p}, t);
  return evolve_gaussian(s, seg.tangents.back(), seg.points.back());
}

/// Shape after linear evolution written directly in terms of b.
inline cplx evolve_shape(cplx b, const CMat2& M) {
  const cplx I(0.0, 1.0);
  return (b * M.m11 - I * M.m12) / (M.m22 + I * M.m21 * b);
}

// ---------------------------------------------------------------------------------------
// Overlaps of Wigner densities under the baker's map.

struct OverlapTerm {
  std::size_t branch = 0;  // binary word of the n q-digits, most significant first
  double value = 0.0;
};

struct OverlapResult {
  double total = 0.0;
  std::vector<OverlapTerm> terms;
};

namespace detail {

inline double gaussian_density(double dx, double dy, const RMat2& S) {
  const RMat2 Si = S.inverse();
  const double e = Si.m11 * dx * dx + 2.0 * Si.m12 * dx * dy + Si.m22 * dy * dy;
  return std::exp(-0.5 * e) / (2.0 * kPi * std::sqrt(S.det()));
}

}  // namespace detail

/// (rho_f, T^n rho_i) as a sum over the 2^n affine branches of T^n. Each term is a Gaussian
/// integral under the branch's linear map; periodic images of rho_f are included.
inline OverlapResult heteroclinic_overlap(const GaussianState& rf, const GaussianState& ri,
                                          const MapSystem& m, std::size_t n,
                                          double term_floor = 0.0) {
  if (m.kind != MapKind::baker) {
    throw Error(ErrorKind::unsupported, "overlap sum needs a piecewise-linear map");
  }
  if (n > 24) throw Error(ErrorKind::budget, "branch count 2^n exceeds the supported budget");
  rf.validate();
  ri.validate();
  const RMat2 Sf = rf.covariance(), Si = ri.covariance();
  const double scale = std::ldexp(1.0, static_cast<int>(n));
  // q-digits stretch, p-digits contract; in (q, p) order L = diag(2^n, 2^-n).
  const RMat2 S = Sf + RMat2{scale * scale * Si.m11, Si.m12, Si.m21, Si.m22 / (scale * scale)};
  OverlapResult out;
  const std::size_t branches = std::size_t{1} << n;
  for (std::size_t w = 0; w < branches; ++w) {
    double cp = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double bit = static_cast<double>((w >> (n - 1 - j)) & 1u);
      cp = 0.5 * (cp + bit);
    }
    const double mq = scale * ri.q - static_cast<double>(w);
    const double mp = ri.p / scale + cp;
    double v = 0.0;
    for (int a = -1; a <= 1; ++a) {
      for (int c = -1; c <= 1; ++c) {
        v += detail::gaussian_density(mq - rf.q - a, mp - rf.p - c, S);
      }
    }
    if (v > term_floor) out.terms.push_back({w, v});
    out.total += v;
  }
  return out;
}

}  // namespace hchaos
