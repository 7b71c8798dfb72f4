#include <gtest/gtest.h>

#include <cmath>

#include "hchaos/orbits.hpp"
#include "hchaos/stability.hpp"
#include "oracles.hpp"

using namespace hchaos;

TEST(Monodromy, HorizontalBounceTrace) {
  const MapSystem m = MapSystem::stadium(1.0);
  const Propagated pr = propagate(m, {0.0, 0.0}, 2);
  EXPECT_NEAR(pr.M.trace(), oracle::two_mirror_trace(4.0, 1.0, 1.0), 1e-9);
  EXPECT_NEAR(pr.M.det(), 1.0, 1e-12);
}

TEST(Monodromy, TraceFollowsEdgeLength) {
  for (double g : {0.5, 1.0, 2.0}) {
    const Propagated pr = propagate(MapSystem::stadium(g), {0.0, 0.0}, 2);
    EXPECT_NEAR(pr.M.trace(), oracle::two_mirror_trace(2 * g + 2, 1.0, 1.0), 1e-8) << g;
  }
}

TEST(Exponent, TraceAndSingularValueForms) {
  const double mu = 0.7;
  const StabilityMatrix s{{std::exp(2 * mu), 0.0, 0.0, std::exp(-2 * mu)}, 2.0};
  EXPECT_NEAR(trace_exponent(s), std::acosh(std::cosh(2 * mu)) / 2, 1e-12);
  EXPECT_NEAR(finite_time_exponent(s), mu, 1e-12);
}

TEST(Exponent, HorizontalBouncePerBounce) {
  const PeriodicOrbit o = make_orbit(MapSystem::stadium(1.0), {0.0, 0.0}, 2);
  EXPECT_NEAR(trace_exponent(o.monodromy), std::acosh(17.0) / 2, 1e-10);
}

TEST(Classify, Tags) {
  EXPECT_EQ(classify({{0.0, 1.0, -1.0, 0.0}, 1.0}).tag, StabilityTag::elliptic);
  EXPECT_EQ(classify({{1.0, 0.3, 0.0, 1.0}, 1.0}).tag, StabilityTag::parabolic);
  EXPECT_EQ(classify({{3.0, 0.0, 0.0, 1.0 / 3}, 1.0}).tag, StabilityTag::hyperbolic);
  EXPECT_EQ(classify({{-3.0, 0.0, 0.0, -1.0 / 3}, 1.0}).tag, StabilityTag::hyperbolic_reflection);
}

TEST(Classify, EllipticRotation) {
  const double th = 0.4;
  const StabilityClass c = classify({{std::cos(th), std::sin(th), -std::sin(th), std::cos(th)}, 1.0});
  EXPECT_NEAR(c.rotation, th, 1e-12);
}

TEST(Determinants, DetMinusOne) {
  const RMat2 M{3.0, -2.0, -4.0, 3.0};
  EXPECT_NEAR(det_m_minus_one(M), 2.0 - M.trace(), 1e-12);
}

TEST(Determinants, IdentityGivesUnitD1) {
  const Determinants d = semiclassical_determinants(RMat2::identity(), cplx(1.0, 0.5), cplx(1.0, 0.0));
  EXPECT_NEAR(std::abs(d.D0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d.D1 - cplx(1.0)), 0.0, 1e-15);
}

TEST(Tangents, EigenDirectionsOfDiagonal) {
  const StabilityMatrix s{{4.0, 0.0, 0.0, 0.25}, 1.0};
  const ManifoldTangents t = manifold_tangents(s);
  // p grows, q contracts under this (p, q)-ordered matrix
  EXPECT_NEAR(std::abs(t.unstable_end.p), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(t.stable_end.q), 1.0, 1e-12);
  EXPECT_NEAR(t.lambda, 4.0, 1e-12);
}

TEST(Caustics, HarmonicZerosOfM21) {
  const MapSystem m = MapSystem::harmonic(1.0, 1.0);
  const TrajectorySegment seg = integrate_flow(m, {1.0, 0.0}, 7.0);
  const auto t = caustic_times(seg);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_NEAR(t[0], M_PI, 1e-3);
  EXPECT_NEAR(t[1], 2 * M_PI, 1e-3);
}
