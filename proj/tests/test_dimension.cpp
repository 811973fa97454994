#include <gtest/gtest.h>

#include <cmath>

#include "combdim/dimension.hpp"
#include "support.hpp"

using namespace combdim;

namespace {

PointSet segment_points(int n) {
  std::vector<double> xs;
  for (int k = 0; k < n; ++k) xs.push_back(static_cast<double>(k) / (n - 1));
  return PointSet::on_axis(xs, "segment");
}

void expect_net_valid(const PointSet& e, const PointSet& net, double scale) {
  const auto& pts = net.points();
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) EXPECT_GE(distance(pts[a], pts[b]), scale);
  }
  for (const Point2& p : e.points()) {
    bool covered = false;
    for (const Point2& q : pts) covered = covered || distance(p, q) < scale;
    EXPECT_TRUE(covered);
  }
}

}  // namespace

TEST(PointSet, SortsAndDedupes) {
  const PointSet s({{1, 0}, {0, 0}, {1, 0}}, "s");
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.points().front(), (Point2{0, 0}));
  EXPECT_THROW(PointSet({{std::nan(""), 0}}), PreconditionError);
}

TEST(SeparatedNet, Examples) {
  const PointSet e = PointSet::on_axis({0, 0.4, 0.8});
  const PointSet net = separated_net(e, 0.5);
  ASSERT_EQ(net.size(), 2u);
  EXPECT_EQ(net.points()[0].x, 0.0);
  EXPECT_EQ(net.points()[1].x, 0.8);
  EXPECT_EQ(separated_net(PointSet::on_axis({0.3}), 0.1).size(), 1u);
  EXPECT_EQ(separated_net(e, 5.0).size(), 1u);
}

TEST(SeparatedNetProperty, SeparatedAndMaximal) {
  testgen::Gen g(51);
  for (int t = 0; t < 20; ++t) {
    std::vector<Point2> pts;
    const int n = g.integer(1, 150);
    for (int k = 0; k < n; ++k) pts.push_back({g.uniform(-1, 1), g.uniform(-1, 1)});
    const PointSet e(pts);
    const double scale = g.uniform(0.01, 0.8);
    expect_net_valid(e, separated_net(e, scale), scale);
  }
}

TEST(BoxCount, CantorThirds) {
  const PointSet e = cantor_endpoint_set(1.0 / 3.0, 8);
  const DimensionEstimate d = box_count(e, geometric_scales(1.0 / 3.0, 2, 7));
  EXPECT_NEAR(d.value, std::log(2.0) / std::log(3.0), 0.03);
  for (const ScaleCount& c : d.counts) {
    const int k = static_cast<int>(std::lround(-std::log(c.scale) / std::log(3.0)));
    EXPECT_EQ(c.count, std::int64_t{1} << (k + 1)) << c.scale;
  }
}

TEST(BoxCount, SingletonAndSquare) {
  EXPECT_EQ(box_count(PointSet({{0.2, 0.3}}), geometric_scales(0.5, 2, 5)).value, 0.0);
  std::vector<Point2> grid;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) grid.push_back({i / 100.0, j / 100.0});
  }
  EXPECT_NEAR(box_count(PointSet(grid), geometric_scales(0.5, 2, 5)).value, 2.0, 0.1);
}

TEST(BoxCount, Errors) {
  const PointSet e = segment_points(20);
  EXPECT_THROW(box_count(PointSet(), {0.1, 0.2, 0.5}), PreconditionError);
  EXPECT_THROW(box_count(e, {0.1, 0.2}), PreconditionError);
  EXPECT_THROW(box_count(e, {0.1, 0.12, 0.15}), PreconditionError);
  EXPECT_THROW(box_count(PointSet::on_axis({0, 1e-9}), {0.1, 0.2, 0.5}), RegressionError);
}

TEST(BoxCountProperty, CantorFamily) {
  for (double lambda : {1.0 / 3.0, 0.4, 0.45}) {
    const DimensionEstimate d = box_count(cantor_endpoint_set(lambda, 10), geometric_scales(lambda, 1, 9));
    EXPECT_NEAR(d.value, std::log(2.0) / -std::log(lambda), 0.05) << lambda;
  }
}

TEST(BoxCountProperty, TranslationInvariantAtAlignedScales) {
  const PointSet e = cantor_endpoint_set(1.0 / 3.0, 7);
  const auto scales = geometric_scales(1.0 / 3.0, 1, 6);
  const DimensionEstimate a = box_count(e, scales);
  for (Point2 v : {Point2{0.37, -1.2}, Point2{-5.0, 3.25}}) {
    const DimensionEstimate b = box_count(e.translated(v), scales);
    for (std::size_t k = 0; k < a.counts.size(); ++k) EXPECT_EQ(a.counts[k].count, b.counts[k].count);
  }
}

TEST(BoxCount, SegmentControl) {
  const DimensionEstimate d = box_count(segment_points(1025), geometric_scales(0.5, 3, 9));
  EXPECT_NEAR(d.value, 1.0, 0.05);
}

TEST(NetHierarchy, TwoPointsCountOne) {
  const NetHierarchy h = build_hierarchy(PointSet::on_axis({0, 1}), 0.5, 1, 6);
  for (int i = h.base_level; i < h.last_level(); ++i) {
    for (std::size_t k = 0; k < h.net(i).size(); ++k) {
      for (int j = i + 1; j <= h.last_level(); ++j) EXPECT_EQ(h.count(i, k, j), 1);
    }
  }
  const NetBoundResult r = net_dimension_bound(h);
  EXPECT_LE(r.estimate.value, 0.01);
}

TEST(NetHierarchy, NetsValidAtEveryLevel) {
  const PointSet e = cantor_endpoint_set(1.0 / 3.0, 6);
  const NetHierarchy h = build_hierarchy(e, 0.5, 1, 8);
  for (int i = h.base_level; i <= h.last_level(); ++i) expect_net_valid(e, h.net(i), std::pow(0.5, i));
  EXPECT_THROW(build_hierarchy(PointSet(), 0.5, 1, 4), PreconditionError);
}

// Oracle: recount N_j by brute force over all net pairs.
TEST(NetHierarchy, CountsMatchBruteForce) {
  const PointSet e = segment_points(17);
  const NetHierarchy h = build_hierarchy(e, 0.5, 1, 5);
  for (int i = h.base_level; i < h.last_level(); ++i) {
    const auto& coarse = h.net(i).points();
    for (std::size_t k = 0; k < coarse.size(); ++k) {
      for (int j = i + 1; j <= h.last_level(); ++j) {
        std::int64_t n = 0;
        for (const Point2& q : h.net(j).points()) n += distance(q, coarse[k]) < std::pow(0.5, i) + std::pow(0.5, j);
        EXPECT_EQ(h.count(i, k, j), n) << i << " " << k << " " << j;
      }
    }
  }
}

TEST(NetBound, CantorAndSegment) {
  const NetBoundResult c = net_dimension_bound(build_default_hierarchy(cantor_endpoint_set(1.0 / 3.0, 10), 0.5));
  EXPECT_GE(c.estimate.value, 0.63);
  EXPECT_LE(c.estimate.value, 0.75);
  const NetBoundResult s = net_dimension_bound(build_default_hierarchy(segment_points(1025), 0.5));
  EXPECT_GE(s.estimate.value, 1.0);
  EXPECT_LE(s.estimate.value, 1.1);
}

TEST(NetBound, FailureCarriesBall) {
  const NetHierarchy h = build_default_hierarchy(segment_points(257), 0.5);
  try {
    net_dimension_bound(h, {0.1, 0.2});
    FAIL() << "expected NetBoundFailure";
  } catch (const NetBoundFailure& f) {
    EXPECT_GE(f.violating.i, h.base_level);
  }
}

TEST(NetBoundProperty, DeeperNeverWorseByMoreThanAStep) {
  // Same tested balls (levels 1..6) at every depth: deeper only adds witnesses.
  const PointSet e = cantor_endpoint_set(1.0 / 3.0, 9);
  double prev = 2.0;
  for (int depth = 7; depth <= 13; ++depth) {
    const NetHierarchy h = build_hierarchy(e, 0.5, 1, depth);
    const NetBoundResult r = net_dimension_bound(h, default_s_grid(), h.last_level() - 6);
    ASSERT_EQ(r.tested_levels, 6);
    EXPECT_LE(r.estimate.value, prev + 0.01 + 1e-12) << depth;
    prev = r.estimate.value;
  }
}

TEST(NetBoundProperty, DefaultWindowDriftStaysSmall) {
  // the default window also tests finer balls as depth grows, so s may rise a little
  const PointSet e = cantor_endpoint_set(1.0 / 3.0, 9);
  for (int depth = 8; depth <= 13; ++depth) {
    const double s = net_dimension_bound(build_hierarchy(e, 0.5, 1, depth)).estimate.value;
    EXPECT_GE(s, 0.6);
    EXPECT_LE(s, 0.8) << depth;
  }
}

TEST(NetBoundProperty, TranslationInvariant) {
  const PointSet e = cantor_endpoint_set(1.0 / 3.0, 6);
  const NetHierarchy a = build_hierarchy(e, 0.5, 1, 8);
  const NetHierarchy b = build_hierarchy(e.translated({0.25, -0.5}), 0.5, 1, 8);
  EXPECT_EQ(a.counts, b.counts);
}
