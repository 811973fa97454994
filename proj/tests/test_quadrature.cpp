#include <gtest/gtest.h>

#include <cmath>

#include "combdim/curve.hpp"
#include "combdim/quadrature.hpp"
#include "support.hpp"

using namespace combdim;

TEST(Exponent, Range) {
  EXPECT_THROW(Exponent(1.0), PreconditionError);
  EXPECT_THROW(Exponent(2.0), PreconditionError);
  EXPECT_DOUBLE_EQ(Exponent(1.25).two_minus(), 0.75);
}

TEST(SegmentIntegral, SmoothLinearDistance) {
  // dist = 1 + x on [0, 1]: integral ((2)^(2-p) - 1) / (2-p)
  auto field = make_field([](Point2 z) { return 1.0 + z.x; });
  for (double p : {1.1, 1.5, 1.9}) {
    const auto r = segment_integral(field, {0, 0}, {1, 0}, p, 1e-10);
    EXPECT_NEAR(r.value, (std::pow(2.0, 2 - p) - 1) / (2 - p), 1e-11);
  }
}

TEST(SegmentIntegral, InteriorSingularPoint) {
  auto field = make_field([](Point2 z) { return std::abs(z.x - 0.3); }, {{0.3, 0.0}});
  for (double p : {1.1, 1.5, 1.95}) {
    const double q = 2 - p;
    const auto r = segment_integral(field, {0, 0}, {1, 0}, p, 1e-10);
    const double exact = (std::pow(0.3, q) + std::pow(0.7, q)) / q;
    EXPECT_NEAR(r.value, exact, 1e-9 * exact) << p;
    EXPECT_LE(r.error, 1e-10 * exact * 10);
  }
}

TEST(SegmentIntegral, QuadraticSingularityAtEnd) {
  // dist = t^2 gives t^(2(1-p)); integrable for p < 1.5.
  auto field = make_field([](Point2 z) { return z.x * z.x; });
  const double p = 1.3;
  const auto r = segment_integral(field, {0, 0}, {1, 0}, p, 1e-9);
  EXPECT_NEAR(r.value, 1.0 / (2.0 * (1 - p) + 1.0), 1e-7);
}

TEST(SegmentIntegral, ZeroLength) {
  auto field = make_field([](Point2) { return 1.0; });
  EXPECT_EQ(segment_integral(field, {0.2, 0.2}, {0.2, 0.2}, 1.5, 1e-8).value, 0.0);
}

TEST(SegmentIntegral, BudgetExhaustionCarriesSegment) {
  auto field = make_field([](Point2 z) { return std::abs(std::sin(40.0 * z.x)) + 1e-3; });
  try {
    segment_integral(field, {0, 0}, {3, 0}, 1.5, 1e-12, 4);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.segment[0], 0.0);
    EXPECT_EQ(e.segment[2], 3.0);
  }
}

TEST(FieldIntegral, ProfileMatchesClosedForm) {
  testgen::Gen g(31);
  for (int t = 0; t < 40; ++t) {
    const double p = g.uniform(1.05, 1.95);
    const double len = g.uniform(1e-3, 3.0);
    const Point2 a{g.uniform(-2, 2), g.uniform(-2, 2)};
    const double ang = g.uniform(0, 6.283185307179586);
    const Point2 b = a + len * Point2{std::cos(ang), std::sin(ang)};
    auto field = make_field([a](Point2 z) { return std::sqrt(2.0) * distance(z, a); });
    const auto r = field_integral(Polyline({a, b}), Exponent(p), field, 1e-9);
    const double ref = segment_profile_integral(distance(a, b), Exponent(p));
    EXPECT_NEAR(r.value, ref, 1e-8 * ref);
  }
}
