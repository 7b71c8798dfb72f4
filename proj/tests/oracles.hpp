#pragma once

// Closed forms used as references by the tests and the acceptance binary.

#include <cmath>
#include <cstddef>

namespace oracle {

/// Ai(x) from its Maclaurin series in long double; accurate for |x| <= 6.
inline double airy_series(double xd) {
  const long double x = xd;
  const long double c1 = 0.355028053887817239L, c2 = 0.258819403792806798L;
  long double f = 1.0L, g = x, sf = f, sg = g;
  for (int k = 1; k < 200; ++k) {
    f *= x * x * x / ((3.0L * k - 1.0L) * (3.0L * k));
    g *= x * x * x / ((3.0L * k) * (3.0L * k + 1.0L));
    sf += f;
    sg += g;
    if (std::fabs(f) + std::fabs(g) < 1e-30L) break;
  }
  return static_cast<double>(c1 * sf - c2 * sg);
}

/// Trace of the two-bounce monodromy between concave mirrors of radii r1, r2 a distance L apart.
inline double two_mirror_trace(double L, double r1, double r2) {
  return 2.0 * (2.0 * (1.0 - L / r1) * (1.0 - L / r2) - 1.0);
}

/// Period of V = alpha q^4 at energy E by midpoint quadrature; q = a (1 - s^2) removes the
/// turning-point singularity.
inline double quartic_period_quadrature(double mass, double alpha, double E, std::size_t n = 200000) {
  const double a = std::pow(E / alpha, 0.25);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = (i + 0.5) / n;
    const double q = a * (1.0 - s * s);
    const double v = std::sqrt(2.0 * (E - alpha * q * q * q * q) / mass);
    sum += 2.0 * a * s / v;
  }
  return 4.0 * sum / n;
}

}  // namespace oracle
