#include <gtest/gtest.h>

#include <cmath>

#include "hchaos/complexdyn.hpp"
#include "hchaos/gaussian.hpp"
#include "oracles.hpp"

using namespace hchaos;

TEST(Airy, IntegralMatchesSeries) {
  for (double x : {-5.0, -2.0, 0.0, 1.0, 3.0}) {
    EXPECT_NEAR(airy_integral(x), oracle::airy_series(x), 1e-9) << x;
  }
}

TEST(Airy, WkbWithinTwoPercent) {
  for (double q : {-5.0, 3.0}) {
    const double ref = oracle::airy_series(q);
    EXPECT_NEAR(airy_wkb(q).value / ref, 1.0, 0.02) << q;
  }
}

TEST(Airy, TurningPointRejected) { EXPECT_THROW(airy_wkb(0.0), Error); }

TEST(ComplexFlow, RampClosedForm) {
  // H = p^2 + q: p(t) = p0 - t, q(t) = q0 + 2 p0 t - t^2
  const MapSystem m = MapSystem::linear_ramp();
  const cplx q0(4.0), p0(0.0, -2.0), t(0.0, -4.0);
  const auto tr = complex_integrate(m, {q0, p0}, TimePath::straight(t));
  EXPECT_LT(std::abs(tr.end.p - (p0 - t)), 1e-10);
  EXPECT_LT(std::abs(tr.end.q - (q0 + 2.0 * p0 * t - t * t)), 1e-10);
  EXPECT_LT(complex_energy_drift(m, tr), 1e-10);
}

TEST(ComplexFlow, HarmonicPathIndependence) {
  const MapSystem m = MapSystem::harmonic(1.0, 1.0);
  const ComplexPhasePoint z0{cplx(1.0, 0.2), cplx(-0.3, 0.1)};
  const cplx T(2.0, 0.7);
  const auto a = complex_integrate(m, z0, TimePath::straight(T));
  const auto b = complex_integrate(m, z0, TimePath::through({cplx(0.0, 1.5), cplx(2.5, 1.0), T}));
  EXPECT_LT(std::abs(a.end.q - b.end.q), 1e-9);
  EXPECT_LT(std::abs(a.end.p - b.end.p), 1e-9);
  EXPECT_LT(std::abs(a.end.q - (z0.q * std::cos(T) + z0.p * std::sin(T))), 1e-9);
}

TEST(ComplexFlow, RejectsMaps) {
  EXPECT_THROW(complex_integrate(MapSystem::baker(), {0.1, 0.1}, TimePath::straight(1.0)), Error);
}

TEST(Quartic, PeriodMatchesQuadrature) {
  const MapSystem m = MapSystem::quartic(1.0, 1.0);
  EXPECT_NEAR(quartic_period(m, 1.0), oracle::quartic_period_quadrature(1.0, 1.0, 1.0), 1e-6);
  const auto seg = integrate_flow(m, {1.0, 0.0}, quartic_period(m, 1.0));
  EXPECT_NEAR(seg.points.back().q, 1.0, 1e-8);
}

TEST(Gaussian, QuarterTurnInvertsWidth) {
  const GaussianState g{0.0, 0.0, cplx(2.0, 0.0), 1.0};
  const RMat2 M{0.0, -1.0, 1.0, 0.0};  // harmonic quarter period, (p, q) order
  const GaussianState h = evolve_gaussian(g, M, {0.0, 0.0});
  EXPECT_NEAR(std::abs(h.b - cplx(0.5)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(evolve_shape(g.b, CMat2{0.0, -1.0, 1.0, 0.0}) - cplx(0.5)), 0.0, 1e-14);
}

TEST(Gaussian, WignerNormalised) {
  const GaussianState g{0.3, -0.2, cplx(1.5, 0.4), 0.7};
  EXPECT_NEAR(g.wigner_matrix().det(), 1.0, 1e-14);
  EXPECT_NEAR(g.wigner({0.3, -0.2}), 1.0 / (M_PI * 0.7), 1e-14);
}

TEST(Gaussian, SelfOverlap) {
  const GaussianState g{0.5, 0.5, cplx(1.0, 0.0), 1e-3};
  const auto o = heteroclinic_overlap(g, g, MapSystem::baker(), 0);
  EXPECT_NEAR(o.total, 1.0 / (2 * M_PI * 1e-3), 1e-6);
  EXPECT_THROW(heteroclinic_overlap(g, g, MapSystem::stadium(1.0), 1), Error);
}

TEST(Saddle, HarmonicConvergesToRealCentroid) {
  const MapSystem m = MapSystem::harmonic(1.0, 1.0);
  const GaussianState s1{1.0, 0.0, cplx(1.0, 0.0), 1.0};
  const GaussianState s2 = evolve_gaussian_flow(m, s1, 1.3);
  const auto r = saddle_search(s1, s2, m, 1.3, {cplx(1.2, 0.1), cplx(0.2, 0.3)});
  EXPECT_LT(std::abs(r.residual1), 1e-10);
  EXPECT_LT(std::abs(r.residual2), 1e-10);
  EXPECT_LT(std::abs(r.start.q - cplx(1.0)), 1e-9);
  EXPECT_LT(std::abs(r.start.p), 1e-9);
  const auto again = saddle_search(s1, s2, m, 1.3, r.start);
  EXPECT_EQ(again.iterations, 0u);
}

TEST(Manifold, PointSatisfiesResidual) {
  const GaussianState s{0.4, -0.1, cplx(1.3, 0.2), 1.0};
  EXPECT_LT(std::abs(manifold_residual(s, lagrangian_manifold_point(s, cplx(0.7, 0.5)))), 1e-15);
}

TEST(Phase, UnitCircleWinding) {
  const auto pt = track_determinant([](double t) { return std::exp(cplx(0.0, t)); }, 0.0, 4 * M_PI,
                                    DeterminantKind::D1);
  EXPECT_NEAR(pt.winding, 2.0, 1e-9);
}

TEST(Phase, HarmonicD1IsUnitPhasor) {
  // b = 1: D1 = cos t + i sin t
  const MapSystem m = MapSystem::harmonic(1.0, 1.0);
  FlowDeterminant D(m, {1.0, 0.0}, DeterminantKind::D1, 1.0, 1.0);
  EXPECT_NEAR(std::abs(D(0.0) - cplx(1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(D(0.9) - std::exp(cplx(0.0, 0.9))), 0.0, 1e-9);
  const auto pt = track_determinant(std::ref(D), 0.0, 2 * M_PI, DeterminantKind::D1);
  EXPECT_NEAR(pt.winding, 1.0, 1e-8);
}

TEST(Phase, VanishingDeterminantThrows) {
  EXPECT_THROW(track_determinant([](double t) { return cplx(t - 1.0, 0.0); }, 0.0, 2.0,
                                 DeterminantKind::D1),
               Error);
}

TEST(Phase, SignFlipCorrection) {
  const auto sc = correct_sign_flips({0.1, 0.12, 0.14 - M_PI, 0.16 - M_PI, 0.18 - M_PI});
  EXPECT_EQ(sc.corrections, 1u);
  EXPECT_LT(sc.max_jump, 0.05);
  EXPECT_NEAR(sc.half_phase.back(), 0.18, 1e-12);
}
