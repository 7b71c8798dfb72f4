#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <utility>

namespace hchaos {

using cplx = std::complex<double>;

/// 2-vector in (q, p) order unless stated otherwise.
template <typename T>
struct Vec2 {
  T a{};
  T b{};

  constexpr Vec2 operator+(const Vec2& o) const { return {a + o.a, b + o.b}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {a - o.a, b - o.b}; }
  constexpr Vec2 operator*(T s) const { return {a * s, b * s}; }
};

/// Dense 2x2 matrix, row-major: [[m11, m12], [m21, m22]].
template <typename T>
struct Mat2 {
  T m11{1}, m12{0}, m21{0}, m22{1};

  static constexpr Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }
  static constexpr Mat2 zero() { return {T(0), T(0), T(0), T(0)}; }

  constexpr T det() const { return m11 * m22 - m12 * m21; }
  constexpr T trace() const { return m11 + m22; }
  constexpr Mat2 transpose() const { return {m11, m21, m12, m22}; }

  constexpr Mat2 operator*(const Mat2& o) const {
    return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
            m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
  }
  constexpr Vec2<T> operator*(const Vec2<T>& v) const {
    return {m11 * v.a + m12 * v.b, m21 * v.a + m22 * v.b};
  }
  constexpr Mat2 operator+(const Mat2& o) const {
    return {m11 + o.m11, m12 + o.m12, m21 + o.m21, m22 + o.m22};
  }
  constexpr Mat2 operator-(const Mat2& o) const {
    return {m11 - o.m11, m12 - o.m12, m21 - o.m21, m22 - o.m22};
  }
  constexpr Mat2 operator*(T s) const { return {m11 * s, m12 * s, m21 * s, m22 * s}; }

  /// Inverse; caller guarantees det != 0.
  constexpr Mat2 inverse() const {
    const T d = det();
    return {m22 / d, -m12 / d, -m21 / d, m11 / d};
  }
};

using RMat2 = Mat2<double>;
using CMat2 = Mat2<cplx>;

inline double max_abs_diff(const RMat2& x, const RMat2& y) {
  using std::abs;
  double r = abs(x.m11 - y.m11);
  r = std::max(r, abs(x.m12 - y.m12));
  r = std::max(r, abs(x.m21 - y.m21));
  return std::max(r, abs(x.m22 - y.m22));
}

/// Eigen-decomposition of a real symmetric 2x2 matrix. Returns (lo, hi) eigenvalues and
/// the unit eigenvector of the larger one.
struct SymEigen {
  double lo;
  double hi;
  Vec2<double> hi_vec;
  Vec2<double> lo_vec;
};

inline SymEigen sym_eigen(double a, double b, double c) {
  // [[a, b], [b, c]]
  const double tr = a + c;
  const double diff = a - c;
  const double disc = std::sqrt(diff * diff + 4.0 * b * b);
  const double hi = 0.5 * (tr + disc);
  // lo via the determinant keeps precision when hi >> lo
  const double det = a * c - b * b;
  const double lo = hi != 0.0 ? det / hi : 0.5 * (tr - disc);
  Vec2<double> v;
  if (std::abs(b) > 1e-300) {
    v = (std::abs(hi - a) > std::abs(hi - c)) ? Vec2<double>{b, hi - a} : Vec2<double>{hi - c, b};
  } else {
    v = a >= c ? Vec2<double>{1.0, 0.0} : Vec2<double>{0.0, 1.0};
  }
  const double n = std::hypot(v.a, v.b);
  v = {v.a / n, v.b / n};
  return {lo, hi, v, {-v.b, v.a}};
}

/// Eigenvector of a general real 2x2 matrix for a given real eigenvalue.
inline Vec2<double> eigvec(const RMat2& m, double lambda) {
  Vec2<double> v1{m.m12, lambda - m.m11};
  Vec2<double> v2{lambda - m.m22, m.m21};
  Vec2<double> v = (std::hypot(v1.a, v1.b) >= std::hypot(v2.a, v2.b)) ? v1 : v2;
  const double n = std::hypot(v.a, v.b);
  if (n == 0.0) return {1.0, 0.0};
  return {v.a / n, v.b / n};
}

}  // namespace hchaos
