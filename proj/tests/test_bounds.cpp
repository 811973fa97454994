#include <gtest/gtest.h>

#include <cmath>

#include "combdim/bounds.hpp"
#include "support.hpp"

using namespace combdim;

TEST(MainBound, Examples) {
  // 0.5 + log2(1 - (sqrt2 - 1)/4), evaluated directly.
  const double direct = 0.5 + std::log2(1.0 - (std::sqrt(2.0) - 1.0) / 4.0);
  EXPECT_NEAR(main_bound(1.5, 1.0).rhs, direct, 1e-15);
  EXPECT_NEAR(direct, 0.3422896, 1e-7);
  EXPECT_NEAR(main_bound(1.3, 1e9).rhs, 0.7, 1e-8);
  EXPECT_GT(main_bound(1.5, 2.0).rhs, main_bound(1.5, 1.0).rhs);
  EXPECT_TRUE(main_bound(1.5, 1.0).admissible);
  EXPECT_THROW(main_bound(1.5, 0.5), PreconditionError);
  EXPECT_THROW(main_bound(2.0, 3.0), PreconditionError);
}

TEST(MainBoundProperty, StrictlyMonotoneInC) {
  for (double p : {1.1, 1.5, 1.9}) {
    double prev = -1e300;
    for (int k = 0; k < 2000; ++k) {
      const double r = main_bound(p, std::pow(10.0, 6.0 * k / 1999.0)).rhs;
      EXPECT_GT(r, prev);
      EXPECT_LT(r, 2.0 - p);
      prev = r;
    }
  }
}

TEST(M1Floor, Examples) {
  EXPECT_NEAR(m1_floor(1.5), (std::sqrt(2.0) - 1) / (4 * std::log(2.0)), 1e-15);
  EXPECT_NEAR(m1_floor(1.5), 0.149396, 1e-6);
  EXPECT_NEAR(m1_floor(2.0 - 1e-9), 1.0 / (2 * std::log(2.0)), 1e-8);
  EXPECT_NEAR(m1_floor(1.0 + 1e-9), 0.0, 1e-9);
  EXPECT_NEAR(main_bound(1.5, 1e6).scaled_gap, m1_floor(1.5), 1e-6);
}

TEST(M1FloorProperty, ScaledGapDecreasesToFloor) {
  for (double p = 1.1; p < 1.95; p += 0.1) {
    double prev = 1e300;
    for (int e = 0; e <= 20; ++e) {
      const double g = main_bound(p, std::ldexp(1.0, e)).scaled_gap;
      EXPECT_GE(g, m1_floor(p));
      EXPECT_LT(g, prev);
      prev = g;
    }
    EXPECT_LE((prev - m1_floor(p)) / m1_floor(p), 1e-4);
  }
}

TEST(CurveConstantBound, Examples) {
  EXPECT_NEAR(curve_constant_bound(1.2, 1.0 / 3.0, 9.0), 159.83, 5e-3);
  EXPECT_NEAR(curve_constant_bound(1.2, 1.0 / 3.0, 18.0), 2 * curve_constant_bound(1.2, 1.0 / 3.0, 9.0), 1e-12);
  const double hi = sharp_lambda_hi(1.2);
  EXPECT_GT(curve_constant_bound(1.2, hi * (1 - 1e-9), 9.0), 1e9);
  EXPECT_THROW(curve_constant_bound(1.5, 1.0 / 3.0, 9.0), AdmissibilityError);
}

TEST(FP, Examples) {
  for (double p : {1.1, 1.5, 1.9}) EXPECT_NEAR(f_p_eval(sharp_lambda_hi(p), p), 0.0, 1e-14);
  EXPECT_NEAR(sharp_lambda_lo(1.5), 0.125, 1e-16);
  EXPECT_LE(f_p_eval(0.125, 1.5), 0.0);
}

TEST(CThreshold, ExamplesAndIdentity) {
  EXPECT_NEAR(c_threshold(1.2, 9.0), 92.04, 5e-3);
  EXPECT_NEAR(c_threshold(1.2, 18.0), 2 * c_threshold(1.2, 9.0), 1e-12);
  for (double p = 1.05; p < 2.0; p += 0.05) {
    const double a = c_threshold(p, 9.0);
    EXPECT_NEAR(curve_constant_bound(p, sharp_lambda_lo(p), 9.0), a, 1e-12 * a);
  }
}

TEST(LambdaForC, QuadraticRoot) {
  // u = lambda^0.8 solves 2u^2 - u + c/(C q) = 0; admissible root is the larger one.
  const double k = 9.0 / (200.0 * 0.8);
  const double u = (1.0 + std::sqrt(1.0 - 8.0 * k)) / 4.0;
  EXPECT_NEAR(u, 0.43540, 1e-5);
  const double want = std::pow(u, 1.0 / 0.8);
  EXPECT_NEAR(lambda_for_C(1.2, 200.0, 9.0), want, 1e-8);
}

TEST(LambdaForC, ThresholdAndErrors) {
  for (double p : {1.1, 1.5, 1.9}) {
    EXPECT_EQ(lambda_for_C(p, c_threshold(p, 9.0), 9.0), sharp_lambda_lo(p));
    EXPECT_THROW(lambda_for_C(p, 0.99 * c_threshold(p, 9.0), 9.0), NoRootError);
  }
}

TEST(LambdaForCProperty, ResidualAndMonotone) {
  testgen::Gen g(61);
  for (int t = 0; t < 300; ++t) {
    const double p = g.uniform(1.02, 1.98);
    const double c = g.uniform(0.5, 20.0);
    const double C = c_threshold(p, c) * std::exp(g.uniform(0.0, 8.0));
    const double lam = lambda_for_C(p, C, c);
    EXPECT_GE(lam, sharp_lambda_lo(p));
    EXPECT_LT(lam, sharp_lambda_hi(p));
    EXPECT_NEAR(curve_constant_bound(p, lam, c), C, 1e-10 * C);
    EXPECT_GT(lambda_for_C(p, 2 * C, c), lam);
  }
}

TEST(Sharpness, PassesAcrossP) {
  for (double p : {1.1, 1.3, 1.5, 1.7, 1.9}) {
    const SharpnessReport r = verify_sharpness(p, 9.0, 1000);
    EXPECT_TRUE(r.pass()) << p;
    EXPECT_TRUE(r.violations.empty());
    EXPECT_NEAR(r.M2, 72.0 / std::log(2.0), 1e-12);
  }
}

TEST(Sharpness, HalvedCoefficientIsNotCaught) {
  // The control reported next to the check: every inequality still holds.
  const SharpnessReport r = verify_sharpness(1.5, 9.0, 1000, 1.0 / std::log(2.0));
  EXPECT_TRUE(r.pass());
}

TEST(Sharpness, UndershootCoefficientFails) {
  const SharpnessReport r = verify_sharpness(1.5, 9.0, 1000, 0.9 / std::log(2.0));
  EXPECT_FALSE(r.pass_a);
  EXPECT_FALSE(r.violations.empty());
  EXPECT_EQ(r.violations.front().check, 'a');
}

TEST(Consistency, CombFamilyHasPositiveMargin) {
  for (double lambda : {0.1, 0.2, 0.25, 1.0 / 3.0, 0.4, 0.45}) {
    for (double p = 1.05; p < 2.0; p += 0.05) {
      if (!admissible(lambda, p)) continue;
      const ConsistencyRecord r = bound_consistency(lambda, p, 9.0);
      EXPECT_GT(r.margin, 0.0) << lambda << " " << p;
    }
  }
}
