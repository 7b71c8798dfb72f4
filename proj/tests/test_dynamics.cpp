#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hchaos/dynamics.hpp"
#include "hchaos/stadium.hpp"

using namespace hchaos;

namespace {

// Jacobian of one step by centred differences, (p, q) order.
RMat2 numeric_jacobian(const MapSystem& m, const PhasePoint& x, double h = 1e-6) {
  auto f = [&](double dq, double dp) { return step(m, {x.q + dq, x.p + dp}).next; };
  const PhasePoint qp = f(h, 0), qm = f(-h, 0), pp = f(0, h), pm = f(0, -h);
  const double L = q_period(m);
  auto dq = [&](double a, double b) { return L > 0 ? periodic_diff(a, b, L) : a - b; };
  return {(pp.p - pm.p) / (2 * h), (qp.p - qm.p) / (2 * h), dq(pp.q, pm.q) / (2 * h),
          dq(qp.q, qm.q) / (2 * h)};
}

}  // namespace

TEST(StandardMap, StepMatchesKickThenDrift) {
  const double K = 1.3;
  const PhasePoint x{0.2, 0.1};
  const PhasePoint y = standard_map_step(x, K, Chart::cylinder);
  const double p1 = 0.1 - K / (2 * M_PI) * std::sin(2 * M_PI * 0.2);
  EXPECT_NEAR(y.p, p1, 1e-15);
  EXPECT_NEAR(y.q, 0.2 + p1, 1e-15);
}

TEST(StandardMap, ZeroKickIsShear) {
  const MapSystem m = MapSystem::standard_map(0.0);
  const PhasePoint y = step(m, {0.25, 0.3}).next;
  EXPECT_NEAR(y.q, 0.55, 1e-15);
  EXPECT_NEAR(y.p, 0.3, 1e-15);
}

TEST(StandardMap, RejectsBilliardChart) {
  EXPECT_THROW(MapSystem::standard_map(1.0, Chart::billiard), Error);
}

TEST(Baker, DoublesQAndHalvesP) {
  const PhasePoint y = baker_step({0.3, 0.6});
  EXPECT_NEAR(y.q, 0.6, 1e-15);
  EXPECT_NEAR(y.p, 0.3, 1e-15);
  const PhasePoint z = baker_step({0.75, 0.5});
  EXPECT_NEAR(z.q, 0.5, 1e-15);
  EXPECT_NEAR(z.p, 0.75, 1e-15);
  const PhasePoint back = baker_step_back(z);
  EXPECT_NEAR(back.q, 0.75, 1e-15);
  EXPECT_NEAR(back.p, 0.5, 1e-15);
}

TEST(Stadium, RejectsNonPositiveGamma) { EXPECT_THROW(MapSystem::stadium(0.0), Error); }

TEST(Stadium, ChartGeometry) {
  const Stadium s(1.0);
  EXPECT_NEAR(s.perimeter(), 2 * M_PI + 4, 1e-14);
  const Point2 apex = s.position(0.0);
  EXPECT_NEAR(apex.x, 2.0, 1e-14);
  EXPECT_NEAR(apex.y, 0.0, 1e-14);
  const Point2 left = s.position(s.q_left_apex());
  EXPECT_NEAR(left.x, -2.0, 1e-14);
  EXPECT_NEAR(std::abs(s.position(s.q_bottom_mid()).y), 1.0, 1e-14);
}

TEST(Stadium, HorizontalBounce) {
  const MapSystem m = MapSystem::stadium(1.0);
  const StepResult r = step(m, {0.0, 0.0});
  EXPECT_NEAR(r.next.q, M_PI + 2.0, 1e-12);
  EXPECT_NEAR(r.next.p, 0.0, 1e-12);
  EXPECT_NEAR(r.action, 4.0, 1e-12);
}

TEST(Stadium, ActionIsChordLength) {
  const MapSystem m = MapSystem::stadium(1.0);
  const Stadium s(1.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uq(0.0, s.perimeter()), up(-0.9, 0.9);
  for (int i = 0; i < 50; ++i) {
    const PhasePoint x{uq(rng), up(rng)};
    const StepResult r = step(m, x);
    const Point2 a = s.position(x.q), b = s.position(r.next.q);
    EXPECT_NEAR(r.action, std::hypot(a.x - b.x, a.y - b.y), 1e-10);
  }
}

TEST(Maps, AreaPreservingAndReversible) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (const MapSystem& m : {MapSystem::standard_map(0.9), MapSystem::baker(), MapSystem::stadium(1.0)}) {
    for (int i = 0; i < 40; ++i) {
      PhasePoint x{u(rng), u(rng) - 0.5};
      if (m.kind == MapKind::stadium) x.q *= Stadium(1.0).perimeter();
      if (m.kind == MapKind::baker) x.p += 0.5;
      const StepResult r = step(m, x);
      EXPECT_NEAR(r.jacobian.det(), 1.0, 1e-9) << to_string(m.kind);
      const PhasePoint b = step_back(m, r.next).next;
      EXPECT_LT(chart_distance(m, b, x), 1e-9) << to_string(m.kind);
    }
  }
}

TEST(Maps, JacobianMatchesFiniteDifferences) {
  for (const MapSystem& m : {MapSystem::standard_map(1.7), MapSystem::stadium(1.0)}) {
    for (const PhasePoint x : {PhasePoint{0.37, 0.21}, PhasePoint{1.9, -0.4}, PhasePoint{4.1, 0.55}}) {
      const RMat2 J = step(m, x).jacobian, N = numeric_jacobian(m, x);
      EXPECT_NEAR(J.m11, N.m11, 1e-5);
      EXPECT_NEAR(J.m12, N.m12, 1e-5);
      EXPECT_NEAR(J.m21, N.m21, 1e-5);
      EXPECT_NEAR(J.m22, N.m22, 1e-5);
    }
  }
}

TEST(Flow, HarmonicClosedForm) {
  const MapSystem m = MapSystem::harmonic(1.0, 2.0);
  const double t = 1.3;
  const TrajectorySegment seg = integrate_flow(m, {1.0, 0.5}, t);
  const PhasePoint end = seg.points.back();
  EXPECT_NEAR(end.q, std::cos(2 * t) + 0.25 * std::sin(2 * t), 1e-10);
  EXPECT_NEAR(end.p, -2 * std::sin(2 * t) + 0.5 * std::cos(2 * t), 1e-10);
  const RMat2 M = seg.tangents.back();  // (p, q) order
  EXPECT_NEAR(M.m11, std::cos(2 * t), 1e-10);
  EXPECT_NEAR(M.m12, -2 * std::sin(2 * t), 1e-10);
  EXPECT_NEAR(M.m21, 0.5 * std::sin(2 * t), 1e-10);
  EXPECT_NEAR(M.m22, std::cos(2 * t), 1e-10);
}

TEST(Flow, QuarticConservesEnergy) {
  const MapSystem m = MapSystem::quartic(1.0, 1.0);
  const TrajectorySegment seg = integrate_flow(m, {1.0, 0.0}, 20.0);
  EXPECT_LT(conservation_check(m, seg), 1e-10);
}

TEST(Flow, RejectsMaps) {
  EXPECT_THROW(integrate_flow(MapSystem::baker(), {0.1, 0.1}, 1.0), Error);
}

TEST(Propagate, ComposesJacobians) {
  const MapSystem m = MapSystem::standard_map(0.8);
  const PhasePoint x{0.11, 0.42};
  const Propagated pr = propagate(m, x, 3);
  RMat2 M = RMat2::identity();
  PhasePoint y = x;
  for (int k = 0; k < 3; ++k) {
    const StepResult r = step(m, y);
    M = r.jacobian * M;
    y = r.next;
  }
  EXPECT_NEAR(pr.M.m11, M.m11, 1e-12);
  EXPECT_NEAR(pr.M.m22, M.m22, 1e-12);
  EXPECT_LT(chart_distance(m, pr.end, y), 1e-14);
}
