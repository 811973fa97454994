#include <gtest/gtest.h>

#include <cmath>

#include "combdim/bounds.hpp"
#include "combdim/estimate.hpp"

using namespace combdim;

namespace {

const CombDomain& thirds() {
  static const CombDomain d(CantorParams(1.0 / 3.0, 20), 20);
  return d;
}

}  // namespace

TEST(EstimateC, BelowLemmaBound) {
  const CEstimate est = estimate_C(thirds(), Exponent(1.2), 400, 1);
  EXPECT_GT(est.value, 0.0);
  EXPECT_LE(est.value, curve_constant_bound(1.2, 1.0 / 3.0, 9.0));
  EXPECT_EQ(est.pair_count, 400);
  EXPECT_EQ(est.pairs.size(), 400u);
}

TEST(EstimateC, SinglePairEqualsItsRatio) {
  const CEstimate est = estimate_C(thirds(), Exponent(1.2), 1, 7);
  ASSERT_EQ(est.pairs.size(), 1u);
  EXPECT_EQ(est.value, est.pairs[0].ratio);
  EXPECT_EQ(est.worst_index, 0);
}

TEST(EstimateC, SeedDeterminismAcrossWorkerCounts) {
  const CEstimate a = estimate_C(thirds(), Exponent(1.2), 150, 5, {}, 1);
  const CEstimate b = estimate_C(thirds(), Exponent(1.2), 150, 5, {}, 4);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.worst_index, b.worst_index);
  for (std::size_t k = 0; k < a.pairs.size(); ++k) EXPECT_EQ(a.pairs[k].integral, b.pairs[k].integral);
}

TEST(EstimateC, Preconditions) {
  EXPECT_THROW(estimate_C(thirds(), Exponent(1.2), 0, 1), PreconditionError);
  EXPECT_THROW(estimate_C(thirds(), Exponent(1.5), 10, 1), AdmissibilityError);
}

TEST(EstimateCProperty, NestedPrefixesAreMonotone) {
  const CEstimate full = estimate_C(thirds(), Exponent(1.2), 300, 9);
  double prev = 0.0;
  for (std::int64_t n : {1, 10, 50, 120, 300}) {
    const CEstimate e = estimate_C(thirds(), Exponent(1.2), n, 9);
    EXPECT_GE(e.value, prev);
    for (std::int64_t k = 0; k < n; ++k) EXPECT_EQ(e.pairs[k].x, full.pairs[k].x);
    prev = e.value;
  }
  EXPECT_EQ(prev, full.value);
}

TEST(EstimateCProperty, ReflectionInvariance) {
  const auto pairs = sample_pairs(thirds(), 60, 17);
  for (const auto& [x, y] : pairs) {
    const PairRecord a = evaluate_pair(x, y, Exponent(1.2), thirds(), {});
    const PairRecord b = evaluate_pair(mirror_y(x), mirror_y(y), Exponent(1.2), thirds(), {});
    EXPECT_NEAR(a.ratio, b.ratio, 1e-8 * a.ratio);
    EXPECT_EQ(a.kind, b.kind);
  }
}

TEST(EstimateCProperty, StrataFollowWeights) {
  const auto pairs = sample_pairs(thirds(), 3000, 3);
  int tent = 0;
  int outside = 0;
  for (const auto& [x, y] : pairs) {
    const bool xi = in_open_square(x);
    const bool yi = in_open_square(y);
    tent += xi && yi;
    outside += !xi && !yi;
    if (xi) { EXPECT_NE(thirds().contains(x), Region::interior); }
    if (yi) { EXPECT_NE(thirds().contains(y), Region::interior); }
  }
  EXPECT_NEAR(tent / 3000.0, 0.6, 0.04);
  EXPECT_NEAR(outside / 3000.0, 0.2, 0.03);
}

// Two elevated tent points a horizontal distance eps apart: the vertical
// drops cost a fixed amount while |x - y|^(2-p) shrinks, so the case (ii)
// ratio has no uniform bound.
TEST(EstimateCProperty, CaseTwoRatioUnboundedForCloseElevatedPairs) {
  const double h = 0.15;
  double prev = 0.0;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const PairRecord r = evaluate_pair({0.5 - eps / 2, h}, {0.5 + eps / 2, h}, Exponent(1.2), thirds(), {});
    EXPECT_EQ(r.kind, CurveCase::tent);
    EXPECT_GT(r.ratio, 5.0 * prev);
    prev = r.ratio;
  }
  EXPECT_GT(prev, curve_constant_bound(1.2, 1.0 / 3.0, 9.0));
}
