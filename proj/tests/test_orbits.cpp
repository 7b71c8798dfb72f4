#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "hchaos/orbits.hpp"
#include "hchaos/symbolic.hpp"

using namespace hchaos;

namespace {

bool has_action(const FixedPointCensus& c, double w, double tol = 1e-6) {
  return std::any_of(c.orbits.begin(), c.orbits.end(),
                     [&](const PeriodicOrbit& o) { return std::abs(o.action - w) < tol; });
}

double polygon_length(const Stadium& s, const PeriodicOrbit& o) {
  double L = 0.0;
  for (std::size_t i = 0; i < o.points.size(); ++i) {
    const Point2 a = s.position(o.points[i].q), b = s.position(o.points[(i + 1) % o.points.size()].q);
    L += std::hypot(a.x - b.x, a.y - b.y);
  }
  return L;
}

FixedPointCensus baker_census(std::size_t n) {
  CensusOptions opt;
  opt.grid = false;
  opt.extra_seeds = baker_partition_seeds(n);
  return find_periodic_orbits(MapSystem::baker(), n, opt);
}

}  // namespace

TEST(Newton, HorizontalBounce) {
  const MapSystem m = MapSystem::stadium(1.0);
  const auto x = newton_periodic(m, {0.01, 0.02}, 2);
  ASSERT_TRUE(x.has_value());
  const PeriodicOrbit o = make_orbit(m, *x, 2);
  EXPECT_EQ(o.period, 2u);
  EXPECT_NEAR(o.action, 8.0, 1e-10);
}

TEST(Census, BakerFixedPointCount) {
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto c = baker_census(n);
    EXPECT_EQ(c.fixed_point_count(), (std::size_t{1} << n) - 1) << n;
  }
}

TEST(Census, StadiumPeriodFourGeometry) {
  const MapSystem m = MapSystem::stadium(1.0);
  const auto c = find_periodic_orbits(m, 4);
  EXPECT_TRUE(has_action(c, 4 * std::sqrt(5.0)));       // rhombus through the edge midpoints
  EXPECT_TRUE(has_action(c, 4 + 4 * std::sqrt(2.0)));   // rectangle
  EXPECT_TRUE(has_action(c, 6 * std::sqrt(3.0)));
  EXPECT_TRUE(has_action(c, 8.0));
  const Stadium s(1.0);
  for (const auto& o : c.orbits) EXPECT_NEAR(polygon_length(s, o), o.action, 1e-9);
}

TEST(Census, OrbitsReturnToThemselves) {
  const MapSystem m = MapSystem::stadium(1.0);
  const auto c = find_periodic_orbits(m, 3);
  ASSERT_FALSE(c.orbits.empty());
  for (const auto& o : c.orbits) {
    const Propagated pr = propagate(m, o.points.front(), o.period);
    EXPECT_LT(chart_distance(m, pr.end, o.points.front()), 1e-9);
    EXPECT_NEAR(pr.M.det(), 1.0, 1e-8);
  }
}

TEST(Census, DiamondAppearsAtSixBounces) {
  const auto c = find_periodic_orbits(MapSystem::stadium(1.0), 6);
  EXPECT_TRUE(has_action(c, 8 * std::sqrt(2.0)));
}

TEST(Census, SymmetryCompletionIsClosed) {
  const MapSystem m = MapSystem::stadium(1.0);
  const Stadium s(1.0);
  const auto c = find_periodic_orbits(m, 4);
  for (const auto& o : c.orbits) {
    for (unsigned g = 1; g < 8; ++g) {
      const PhasePoint y = apply_symmetry(s, g, o.points.front());
      const bool found = std::any_of(c.orbits.begin(), c.orbits.end(), [&](const PeriodicOrbit& k) {
        return orbit_contains(m, k, y, 1e-7);
      });
      EXPECT_TRUE(found) << o.itinerary << " g=" << g;
    }
  }
}

TEST(Symmetry, HorizontalOrbitStabilizer) {
  const MapSystem m = MapSystem::stadium(1.0);
  const PeriodicOrbit o = make_orbit(m, {0.0, 0.0}, 2);
  const auto [mask, mult] = symmetry_classify(m, o);
  EXPECT_EQ(mask, 0xFFu);
  EXPECT_EQ(mult, 1u);
}

TEST(Uniformity, BakerTotalIsExact) {
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto c = baker_census(n);
    const auto u = uniformity_sum(MapSystem::baker(), c, [](const PhasePoint&) { return 0; }, 1);
    const double N = std::ldexp(1.0, static_cast<int>(n));
    EXPECT_NEAR(u.total, N / (N - 1), 1e-12) << n;
  }
}

TEST(Uniformity, CellsPartitionTheTotal) {
  const auto c = baker_census(6);
  const auto u = uniformity_sum(
      MapSystem::baker(), c, [](const PhasePoint& x) { return static_cast<int>(x.q * 2); }, 2);
  ASSERT_EQ(u.per_cell.size(), 2u);
  EXPECT_NEAR(u.per_cell[0] + u.per_cell[1], u.total, 1e-12);
}
