#include <gtest/gtest.h>

#include <cmath>

#include "hchaos/perturb.hpp"

using namespace hchaos;

namespace {

const PeriodicOrbit* find_action(const FixedPointCensus& c, double w) {
  for (const auto& o : c.orbits) {
    if (std::abs(o.action - w) < 1e-6) return &o;
  }
  return nullptr;
}

}  // namespace

TEST(Deformation, NormalDisplacement) {
  const Stadium s(1.0);
  EXPECT_NEAR(normal_displacement(s, 0.0), 1.0, 1e-14);
  EXPECT_NEAR(normal_displacement(s, s.q_left_apex()), 1.0, 1e-14);
  EXPECT_EQ(normal_displacement(s, s.q_bottom_mid()), 0.0);
  EXPECT_NEAR(normal_displacement(s, 0.3), std::cos(0.3), 1e-14);
}

TEST(Deformation, TransferChartKeepsGeometry) {
  const Stadium a(1.0), b(1.2);
  EXPECT_NEAR(transfer_chart(a, b, a.q_left_apex()), b.q_left_apex(), 1e-14);
  EXPECT_NEAR(transfer_chart(a, b, a.q_top_mid()), b.q_top_mid(), 1e-14);
  EXPECT_NEAR(transfer_chart(b, a, transfer_chart(a, b, 2.345)), 2.345, 1e-13);
}

TEST(FirstOrder, HorizontalOrbitClosedForm) {
  // W(gamma) = 4 gamma + 4
  const PeriodicOrbit o = make_orbit(MapSystem::stadium(1.0), {0.0, 0.0}, 2);
  EXPECT_NEAR(first_order_action_change(o, {1.0, 1.0}), 4.0, 1e-12);
}

TEST(FirstOrder, RhombusClosedForm) {
  // W(gamma) = 4 sqrt((gamma + 1)^2 + 1)
  const auto c = find_periodic_orbits(MapSystem::stadium(1.0), 4);
  const PeriodicOrbit* o = find_action(c, 4 * std::sqrt(5.0));
  ASSERT_NE(o, nullptr);
  EXPECT_NEAR(first_order_action_change(*o, {1.0, 1.0}), 8 / std::sqrt(5.0), 1e-9);
  const PeriodicOrbit moved = continue_orbit(*o, {1.0, 0.01});
  EXPECT_NEAR(moved.action, 4 * std::sqrt(2.01 * 2.01 + 1), 1e-9);
}

TEST(FirstOrder, MatchesFiniteDifferenceOfContinuation) {
  const auto c = find_periodic_orbits(MapSystem::stadium(1.0), 5);
  int tested = 0;
  for (const auto& o : c.orbits) {
    if (o.period != 5 || tested >= 4) continue;
    const double h = 1e-5;
    const double fd = (continue_orbit(o, {1.0, h}).action - continue_orbit(o, {1.0, -h}).action) / (2 * h);
    EXPECT_NEAR(first_order_action_change(o, {1.0, 1.0}), fd, 1e-6 * std::abs(fd)) << o.itinerary;
    ++tested;
  }
  EXPECT_EQ(tested, 4);
}

TEST(Fit, ExactLine) {
  const LinearFit f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r2, 1.0, 1e-14);
}

TEST(Diffusion, VarianceScalesAsEpsilonSquared) {
  DiffusionOptions opt;
  opt.ensemble = 400;
  opt.steps = 60;
  opt.fit_from = 10;
  opt.fit_to = 60;
  const auto a = action_diffusion(1.0, 0.01, opt), b = action_diffusion(1.0, 0.03, opt);
  EXPECT_NEAR(b.fit.slope / a.fit.slope, 9.0, 1e-9);
  EXPECT_GT(a.fit.r2, 0.9);
}

TEST(Diffusion, DeterministicForSeed) {
  DiffusionOptions opt;
  opt.ensemble = 200;
  opt.steps = 30;
  opt.fit_to = 30;
  const auto a = action_diffusion(1.0, 0.01, opt), b = action_diffusion(1.0, 0.01, opt);
  EXPECT_EQ(a.variance, b.variance);
}

TEST(Stability, SameGammaHasNoSeparation) {
  const StabilityMetric m = manifold_stability_metric(1.0, 1.0, {0.0, 0.075});
  EXPECT_EQ(m.max_separation, 0.0);
}

TEST(Stability, HausdorffOfShiftedSet) {
  const std::vector<PhasePoint> a{{0, 0}, {1, 0}}, b{{0, 0.1}, {1, 0.1}, {5, 5}};
  EXPECT_NEAR(one_sided_hausdorff(a, b), 0.1, 1e-15);
}

TEST(Bifurcation, FamilyAbsentBelowOne) {
  const BifurcationPoint b = bifurcation_point(0.98);
  EXPECT_TRUE(b.near_diamond.empty());
  EXPECT_EQ(b.family_count, 0u);
}
