#pragma once

// Stadium billiard boundary geometry and the exact bounce map in Birkhoff coordinates.
//
// Chart: q is arclength along the boundary (unit semicircle radius, straight edges of
// length 2*gamma), q = 0 at the rightmost point (gamma + 1, 0), increasing clockwise:
//   [0, pi/2)                    lower quarter of the right semicircle
//   [pi/2, pi/2 + 2g)            bottom edge, x decreasing from g to -g
//   [pi/2 + 2g, 3pi/2 + 2g)      left semicircle
//   [3pi/2 + 2g, 3pi/2 + 4g)     top edge, x increasing
//   [3pi/2 + 4g, 2pi + 4g)       upper quarter of the right semicircle
// p is the cosine of the angle between the outgoing velocity and the boundary tangent
// oriented along increasing q.

#include <cmath>
#include <string>

#include "hchaos/core.hpp"
#include "hchaos/linalg.hpp"

namespace hchaos {

enum class Piece { right_arc = 0, bottom = 1, left_arc = 2, top = 3 };

inline bool is_arc(Piece p) { return p == Piece::right_arc || p == Piece::left_arc; }

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct BoundaryFrame {
  Point2 pos;
  Point2 tangent;  // d pos / d q
  Point2 normal;   // inward unit normal
  double curvature = 0.0;
  Piece piece = Piece::right_arc;
};

/// Result of one specular bounce.
struct Bounce {
  PhasePoint next;
  double chord = 0.0;  // Euclidean flight length
  Piece from = Piece::right_arc;
  Piece to = Piece::right_arc;
};

class Stadium {
 public:
  /// Arclength window around a joint that is assigned to the arc side.
  static constexpr double kJointTol = 1e-13;

  explicit Stadium(double gamma) : g_(gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
      throw Error(ErrorKind::invalid_input, "stadium requires gamma > 0");
    }
  }

  double gamma() const { return g_; }
  double perimeter() const { return 2.0 * kPi + 4.0 * g_; }

  // Joint positions along the chart.
  double joint_bottom_start() const { return 0.5 * kPi; }
  double joint_bottom_end() const { return 0.5 * kPi + 2.0 * g_; }
  double joint_top_start() const { return 1.5 * kPi + 2.0 * g_; }
  double joint_top_end() const { return 1.5 * kPi + 4.0 * g_; }

  /// Chart position of the symmetry axes: x-axis at q = 0 and pi + 2g, y-axis at
  /// g + pi/2 and 3g + 3pi/2.
  double q_right_apex() const { return 0.0; }
  double q_left_apex() const { return kPi + 2.0 * g_; }
  double q_bottom_mid() const { return g_ + 0.5 * kPi; }
  double q_top_mid() const { return 3.0 * g_ + 1.5 * kPi; }

  Piece piece_of(double q) const {
    q = wrap_period(q, perimeter());
    if (q < joint_bottom_start() - kJointTol) return Piece::right_arc;
    if (q <= joint_bottom_end() - kJointTol && q >= joint_bottom_start() + kJointTol) {
      return Piece::bottom;
    }
    if (q < joint_bottom_start() + kJointTol) return Piece::right_arc;
    if (q < joint_top_start() + kJointTol) return Piece::left_arc;
    if (q <= joint_top_end() - kJointTol) return Piece::top;
    return Piece::right_arc;
  }

  BoundaryFrame frame(double q) const {
    q = wrap_period(q, perimeter());
    BoundaryFrame f;
    f.piece = piece_of(q);
    switch (f.piece) {
      case Piece::right_arc: {
        const double s = q < kPi ? q : q - perimeter();
        const double phi = -s;
        f.pos = {g_ + std::cos(phi), std::sin(phi)};
        f.tangent = {std::sin(phi), -std::cos(phi)};
        f.normal = {-std::cos(phi), -std::sin(phi)};
        f.curvature = 1.0;
        break;
      }
      case Piece::bottom:
        f.pos = {g_ - (q - joint_bottom_start()), -1.0};
        f.tangent = {-1.0, 0.0};
        f.normal = {0.0, 1.0};
        break;
      case Piece::left_arc: {
        const double phi = 2.0 * g_ - q;
        f.pos = {-g_ + std::cos(phi), std::sin(phi)};
        f.tangent = {std::sin(phi), -std::cos(phi)};
        f.normal = {-std::cos(phi), -std::sin(phi)};
        f.curvature = 1.0;
        break;
      }
      case Piece::top:
        f.pos = {-g_ + (q - joint_top_start()), 1.0};
        f.tangent = {1.0, 0.0};
        f.normal = {0.0, -1.0};
        break;
    }
    return f;
  }

  Point2 position(double q) const { return frame(q).pos; }

  /// Chart coordinate of a boundary point given in Cartesian coordinates.
  double chart_of(Point2 r) const {
    double q;
    if (r.x >= g_) {
      q = -std::atan2(r.y, r.x - g_);
    } else if (r.x <= -g_) {
      double phi = std::atan2(r.y, r.x + g_);
      if (phi > 0.0) phi -= kTwoPi;
      q = 2.0 * g_ - phi;
    } else if (r.y < 0.0) {
      q = joint_bottom_start() + (g_ - r.x);
    } else {
      q = joint_top_start() + (r.x + g_);
    }
    return wrap_period(q, perimeter());
  }

  /// Cartesian outgoing velocity for a chart point.
  Point2 direction(const PhasePoint& x) const {
    const BoundaryFrame f = frame(x.q);
    const double nu = std::sqrt(std::max(0.0, 1.0 - x.p * x.p));
    return {x.p * f.tangent.x + nu * f.normal.x, x.p * f.tangent.y + nu * f.normal.y};
  }

  /// Trace a ray from boundary point `from_q` (with unit direction d) to the next wall.
  Bounce trace(double from_q, Point2 r, Point2 d) const {
    const Piece start = piece_of(from_q);
    double best_t = std::numeric_limits<double>::infinity();
    Piece best_piece = start;
    constexpr double kMinFlight = 1e-12;

    // Straight edges: strictly interior hits; joints belong to the arcs.
    const double edge_lim = g_ - kJointTol;
    if (start != Piece::bottom && d.y < 0.0) {
      const double t = (-1.0 - r.y) / d.y;
      const double x = r.x + t * d.x;
      if (t > kMinFlight && std::abs(x) <= edge_lim && t < best_t) {
        best_t = t;
        best_piece = Piece::bottom;
      }
    }
    if (start != Piece::top && d.y > 0.0) {
      const double t = (1.0 - r.y) / d.y;
      const double x = r.x + t * d.x;
      if (t > kMinFlight && std::abs(x) <= edge_lim && t < best_t) {
        best_t = t;
        best_piece = Piece::top;
      }
    }
    // Semicircles: exit root of the full unit circle around each center.
    for (int side = 0; side < 2; ++side) {
      const Piece arc = side == 0 ? Piece::right_arc : Piece::left_arc;
      const double cx = side == 0 ? g_ : -g_;
      const double ox = r.x - cx, oy = r.y;
      const double b = ox * d.x + oy * d.y;
      double t;
      if (arc == start) {
        t = -2.0 * b;
      } else {
        const double c = ox * ox + oy * oy - 1.0;
        const double disc = b * b - c;
        if (disc < 0.0) continue;
        t = -b + std::sqrt(disc);
      }
      if (!(t > kMinFlight)) continue;
      const double x = r.x + t * d.x;
      const bool on_side = side == 0 ? (x >= g_ - kJointTol) : (x <= -g_ + kJointTol);
      if (on_side && t < best_t) {
        best_t = t;
        best_piece = arc;
      }
    }
    if (!std::isfinite(best_t)) {
      throw Error(ErrorKind::tangency, "ray from q=" + std::to_string(from_q) +
                                           " found no boundary intersection");
    }
    Point2 hit{r.x + best_t * d.x, r.y + best_t * d.y};
    // Snap onto the exact wall so chart conversion sees a boundary point.
    if (best_piece == Piece::bottom) hit.y = -1.0;
    if (best_piece == Piece::top) hit.y = 1.0;
    double q1 = chart_of(hit);
    if (is_arc(best_piece) && piece_of(q1) != best_piece) {
      // Inside the joint window: pin to the arc end of the joint.
      q1 = nearest_arc_q(q1, best_piece);
    }
    const BoundaryFrame f1 = frame(q1);
    const double p1 = d.x * f1.tangent.x + d.y * f1.tangent.y;
    return {{q1, p1}, best_t, start, best_piece};
  }

  Bounce bounce(const PhasePoint& x) const {
    if (!is_finite(x)) throw Error(ErrorKind::invalid_input, "non-finite stadium point");
    if (!(std::abs(x.p) < 1.0)) {
      throw Error(ErrorKind::tangency, "|p| >= 1 is a grazing ray");
    }
    const double q = wrap_period(x.q, perimeter());
    const BoundaryFrame f = frame(q);
    const double nu = std::sqrt(1.0 - x.p * x.p);
    const Point2 d{x.p * f.tangent.x + nu * f.normal.x, x.p * f.tangent.y + nu * f.normal.y};
    return trace(q, f.pos, d);
  }

  /// Time-reversed bounce: T^{-1} = R T R with R(q, p) = (q, -p).
  Bounce bounce_back(const PhasePoint& x) const {
    Bounce b = bounce({x.q, -x.p});
    b.next.p = -b.next.p;
    std::swap(b.from, b.to);
    return b;
  }

  /// Analytic Jacobian of the bounce x -> next, in (p, q) block order:
  /// [[dp1/dp0, dp1/dq0], [dq1/dp0, dq1/dq0]].
  RMat2 jacobian(const PhasePoint& x, const Bounce& b) const {
    const double nu0 = std::sqrt(std::max(0.0, 1.0 - x.p * x.p));
    const double nu1 = std::sqrt(std::max(0.0, 1.0 - b.next.p * b.next.p));
    const double k0 = is_arc(b.from) ? 1.0 : 0.0;
    const double k1 = is_arc(b.to) ? 1.0 : 0.0;
    const double l = b.chord;
    // Second derivatives of the chord-length generating function.
    const double a = nu0 * nu0 / l - k0 * nu0;
    const double c = nu1 * nu1 / l - k1 * nu1;
    const double bb = nu0 * nu1 / l;
    if (!(bb > 0.0) || !std::isfinite(bb)) {
      throw Error(ErrorKind::tangency, "degenerate bounce Jacobian");
    }
    return {-c / bb, (bb * bb - a * c) / bb, -1.0 / bb, -a / bb};
  }

  /// Chord length between two boundary chart positions (the generating function).
  double chord(double q0, double q1) const {
    const Point2 a = position(q0), b = position(q1);
    return std::hypot(b.x - a.x, b.y - a.y);
  }

 private:
  double nearest_arc_q(double q, Piece arc) const {
    const double joints[4] = {joint_bottom_start(), joint_bottom_end(), joint_top_start(),
                              joint_top_end()};
    double best = q, bd = 1e300;
    for (double j : joints) {
      const double d = std::abs(periodic_diff(q, j, perimeter()));
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    // Step just onto the arc side of the joint.
    const double eps = 2.0 * kJointTol;
    const double cand[2] = {best - eps, best + eps};
    for (double c : cand) {
      if (piece_of(c) == arc) return wrap_period(c, perimeter());
    }
    return q;
  }

  double g_;
};

}  // namespace hchaos
