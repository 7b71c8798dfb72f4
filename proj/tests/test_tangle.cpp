#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "hchaos/scenarios.hpp"
#include "hchaos/tangle.hpp"

using namespace hchaos;

namespace {

struct Horizontal {
  MapSystem m = MapSystem::stadium(1.0);
  PeriodicOrbit o = make_orbit(m, {0.0, 0.0}, 2);
  ManifoldParam U{m, o.points[0], 2, Branch::unstable, -1, 1e-8};
  ManifoldParam S{m, o.points[1], 2, Branch::stable, 1, 1e-8};
};

}  // namespace

TEST(CircuitArea, UnitSquare) {
  const std::vector<PhasePoint> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
  EXPECT_NEAR(circuit_area(sq), -1.0, 1e-15);
  std::vector<PhasePoint> rev(sq.rbegin(), sq.rend());
  EXPECT_NEAR(circuit_area(rev), 1.0, 1e-15);
}

TEST(CircuitArea, OpenCircuitThrows) {
  EXPECT_THROW(circuit_area({{0, 0}, {1, 0}, {1, 1}}), Error);
}

TEST(Manifold, PointsStayOnTheManifold) {
  Horizontal s;
  const ManifoldSegment u = grow_manifold(s.U, 3.0);
  ASSERT_GT(u.points.size(), 10u);
  EXPECT_TRUE(u.complete);
  // params increase along the branch
  for (std::size_t i = 2; i < u.params.size(); ++i) EXPECT_GT(u.params[i], u.params[i - 1]);
  // the image of a point one period later is again on the branch (up to polyline resolution)
  std::size_t k = 1;
  while (k + 1 < u.points.size() && u.arclength[k] < 0.05) ++k;
  const PhasePoint x = u.points[k];
  PhasePoint y = x;
  for (int k = 0; k < 2; ++k) y = step(s.m, y).next;
  double best = 1e9;
  const double L = Stadium(1.0).perimeter();
  for (const auto& z : u.points) {
    best = std::min(best, std::hypot(periodic_diff(z.q, y.q, L), z.p - y.p));
  }
  EXPECT_LT(best, 1e-3);
}

TEST(Homoclinic, TurnstileAreas) {
  const auto t = scenarios::detail::turnstile(1.0);
  EXPECT_NEAR(std::abs(t.dw_a), 3.36839, 1e-4);
  EXPECT_NEAR(std::abs(t.dw_b), 2.991143, 1e-4);
  EXPECT_NEAR(std::abs(t.dw_a) - std::abs(t.dw_b), 0.377248, 1e-5);
  EXPECT_LT(t.a.residual, 1e-6);
  EXPECT_LT(t.b.residual, 1e-6);
  const double da = t.a.u - t.a.s, db = t.b.u - t.b.s;
  EXPECT_NEAR(da, std::round(da), 1e-6);
  EXPECT_NEAR(std::abs(db - std::round(db)), 0.5, 1e-6);
}

TEST(Homoclinic, CircuitAndLobeAgreeWithMmp) {
  const auto t = scenarios::detail::turnstile(1.0);
  EXPECT_NEAR(std::abs(area_between_manifolds(t.map, t.U, t.S, t.a)), std::abs(t.dw_a), 1e-4);
  EXPECT_NEAR(std::abs(lobe_area(t.map, t.U, t.S, t.b, t.a)),
              std::abs(t.dw_a) - std::abs(t.dw_b), 1e-4);
}

TEST(Itinerary, Tokens) {
  const auto t = itinerary_tokens("R-TL+B");
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[0], "R-");
  EXPECT_EQ(t[1], "T");
  EXPECT_EQ(t[2], "L+");
  EXPECT_TRUE(cyclic_equal(t, itinerary_tokens("L+BR-T")));
  EXPECT_FALSE(cyclic_equal(t, itinerary_tokens("L-BR-T")));
}

TEST(CurvatureCorrection, RejectsUnrelatedOrbits) {
  const MapSystem m = MapSystem::stadium(1.0);
  const auto c3 = find_periodic_orbits(m, 3);
  const auto c4 = find_periodic_orbits(m, 4);
  std::vector<const PeriodicOrbit*> tri;
  for (const auto& o : c3.orbits) {
    if (o.period == 3) tri.push_back(&o);
  }
  ASSERT_GE(tri.size(), 2u);
  EXPECT_THROW(curvature_correction(*tri[0], *tri[1], c4.orbits.front()), Error);
}

TEST(SieberRichter, PeriodFourPair) {
  const MapSystem m = MapSystem::stadium(1.0);
  const auto pairs = sieber_richter_scan(m, find_periodic_orbits(m, 4));
  const bool found = std::any_of(pairs.begin(), pairs.end(), [](const SieberRichterPair& p) {
    return std::abs(p.delta_w - (6 * std::sqrt(3.0) - 4 - 4 * std::sqrt(2.0))) < 1e-8;
  });
  EXPECT_TRUE(found);
}
