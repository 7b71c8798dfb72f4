#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "hchaos/dynamics.hpp"
#include "hchaos/symbolic.hpp"

using namespace hchaos;

TEST(Fraction, ReducesAndCompares) {
  const Fraction f = Fraction{6, 8}.reduced();
  EXPECT_EQ(f.num, 3u);
  EXPECT_EQ(f.den, 4u);
  EXPECT_TRUE((Fraction{1, 3} == Fraction{2, 6}));
  EXPECT_DOUBLE_EQ(f.value(), 0.75);
}

TEST(BakerExact, StepByHand) {
  const ExactPoint y = baker_step_exact({{2, 3}, {1, 5}});
  EXPECT_TRUE((y.q == Fraction{1, 3}));
  EXPECT_TRUE((y.p == Fraction{3, 5}));
}

TEST(BakerExact, CodesGiveFixedPoints) {
  for (std::size_t n = 1; n <= 12; ++n) {
    for (const auto& code : all_codes(n)) {
      const ExactPoint x0 = periodic_point_exact(code);
      ExactPoint x = x0;
      for (std::size_t k = 0; k < n; ++k) x = baker_step_exact(x);
      ASSERT_TRUE(x == x0) << code;
    }
  }
}

TEST(BakerExact, CodeFormula) {
  // q = I(code)/(2^n-1), p = I(reversed)/(2^n-1)
  const ExactPoint x = periodic_point_exact("RLL");
  EXPECT_TRUE((x.q == Fraction{4, 7}));
  EXPECT_TRUE((x.p == Fraction{1, 7}));
}

TEST(BakerExact, RejectsAliasAndBadCodes) {
  EXPECT_THROW(periodic_point_exact("RRR"), Error);
  EXPECT_THROW(periodic_point_exact(""), Error);
  EXPECT_THROW(periodic_point_exact("RXL"), Error);
}

TEST(BakerCodes, DistinctPoints) {
  const auto codes = all_codes(6);
  EXPECT_EQ(codes.size(), 63u);
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  for (const auto& c : codes) {
    const ExactPoint x = periodic_point_exact(c);
    seen.insert({x.q.num * 1000003u + x.q.den, x.p.num * 1000003u + x.p.den});
  }
  EXPECT_EQ(seen.size(), codes.size());
}

TEST(BakerCodes, FloatingPointMatchesIteration) {
  const PhasePoint x = periodic_point_from_code("RLRRL");
  PhasePoint y = x;
  for (int k = 0; k < 5; ++k) y = baker_step(y);
  EXPECT_NEAR(y.q, x.q, 1e-12);
  EXPECT_NEAR(y.p, x.p, 1e-12);
}

TEST(BakerEncode, RoundTrip) {
  const PhasePoint x{0.3125, 0.6875};
  const SymbolSequence s = baker_encode(x, 20);
  const PhasePoint y = baker_decode(s);
  EXPECT_NEAR(y.q, x.q, 1e-6);
  EXPECT_NEAR(y.p, x.p, 1e-6);
  const PhasePoint z = baker_decode(shift(s)), b = baker_step(x);
  EXPECT_NEAR(z.q, b.q, 1e-5);
  EXPECT_NEAR(z.p, b.p, 1e-5);
}

TEST(Partition, DepthOneCountAtCoarseGrid) {
  PartitionOptions po;
  po.grid_q = po.grid_p = 512;
  EXPECT_EQ(stadium_partition(1.0, 1, po).count(), 16u);
}

TEST(Partition, LabelsRoundTripToText) {
  const Stadium s(1.0);
  const std::uint64_t l = stadium_itinerary_label(s, {0.0, 0.0}, 2);
  EXPECT_EQ(label_string(l), "RLR");
}

TEST(Partition, RejectsDepth) { EXPECT_THROW(stadium_partition(1.0, 0), Error); }

TEST(Entropy, GrowthRatio) {
  EXPECT_NEAR(entropy_bound(60, 192), std::log(3.2), 1e-15);
  EXPECT_THROW(entropy_bound(0, 3), Error);
}
