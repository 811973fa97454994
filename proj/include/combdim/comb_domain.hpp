#pragma once

// The comb domain: the open square (-1,1)^2 minus the closed "tent" set
// K = {(x, y) : x >= 0, |y| <= d(x, C)} where C is a middle-gap Cantor set.
//
// The tent is truncated at `tent_depth`: over each closed interval of that
// level the graph of d(x, C) is replaced by the distance to the interval's
// endpoints. Endpoints are Cantor points, so the truncated removed set is a
// superset of K and its graph lies within lambda^n / 2 of the true one.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "combdim/cantor.hpp"
#include "combdim/error.hpp"
#include "combdim/geometry.hpp"

namespace combdim {

enum class Region { interior, removed, outside_square, boundary };

inline const char* to_string(Region r) {
  switch (r) {
    case Region::interior: return "interior";
    case Region::removed: return "removed";
    case Region::outside_square: return "outside_square";
    case Region::boundary: return "boundary";
  }
  return "?";
}

class CombDomain {
 public:
  /// band < 0 selects the default boundary band 2 * lambda^tent_depth.
  CombDomain(CantorParams cantor, int tent_depth, double band = -1.0)
      : cantor_(cantor), tent_depth_(tent_depth) {
    if (tent_depth < 1) throw PreconditionError("tent_depth must be at least 1");
    if (tent_depth > cantor.max_depth) throw DepthError("tent_depth exceeds the Cantor max_depth");
    const double lam_n = std::pow(cantor.lambda, tent_depth);
    band_ = band < 0.0 ? 2.0 * lam_n : band;
    distance_error_ = 0.5 * lam_n;
    node_height_.resize(static_cast<std::size_t>(tent_depth) + 1);
    for (int k = 0; k <= tent_depth; ++k) {
      const double leaf = 0.5 * lam_n;
      const double gap = k < tent_depth ? 0.5 * (1.0 - 2.0 * cantor.lambda) * std::pow(cantor.lambda, k) : 0.0;
      node_height_[static_cast<std::size_t>(k)] = std::max(leaf, gap);
    }
  }

  explicit CombDomain(CantorParams cantor) : CombDomain(cantor, cantor.max_depth) {}

  const CantorParams& cantor() const { return cantor_; }
  double lambda() const { return cantor_.lambda; }
  int tent_depth() const { return tent_depth_; }
  double band() const { return band_; }
  /// Bound on |reported - true| for boundary distances inside the square.
  double distance_error() const { return distance_error_; }

  /// Height of the truncated tent over x in [0, 1].
  double tent_height(double x) const { return cantor_distance(x, cantor_.lambda, tent_depth_).upper(); }

  Region contains(Point2 z) const { return contains(z, band_); }

  /// Classification with an explicit tolerance band (at least the default).
  Region contains(Point2 z, double band) const {
    band = std::max(band, band_);
    const double ax = std::abs(z.x);
    const double ay = std::abs(z.y);
    const double wall = 1.0 - std::max(ax, ay);
    if (wall < -band) return Region::outside_square;
    if (wall <= band) return Region::boundary;
    if (z.x < 0.0) return std::hypot(z.x, z.y) <= band ? Region::boundary : Region::interior;
    return classify_tent(z.x, ay, band);
  }

  /// Distance from z to the boundary: the four walls plus the truncated tent
  /// graphs y = +-d_n(x). Outside the closed square the walls are nearest
  /// and the answer is exact.
  CertifiedDistance boundary_distance(Point2 z) const {
    const double ax = std::abs(z.x);
    const double ay = std::abs(z.y);
    if (ax >= 1.0 || ay >= 1.0) {
      return {std::hypot(std::max(ax - 1.0, 0.0), std::max(ay - 1.0, 0.0)), 0.0};
    }
    const double wall = 1.0 - std::max(ax, ay);
    return {tent_distance(z, wall), distance_error_};
  }

  /// Distance to the truncated tent graphs, or `cap` if nothing is closer.
  double tent_distance(Point2 z, double cap = std::numeric_limits<double>::infinity()) const {
    const double px = z.x;
    const double py = std::abs(z.y);
    double best = cap;
    struct Node {
      double a, b;
      int level;
    };
    std::array<Node, 2 * 64 + 4> stack{};
    std::size_t top = 0;
    stack[top++] = {0.0, 1.0, 0};
    const double lam = cantor_.lambda;
    while (top > 0) {
      const Node nd = stack[--top];
      const double dx = std::max({nd.a - px, px - nd.b, 0.0});
      const double dy = std::max(py - node_height_[static_cast<std::size_t>(nd.level)], 0.0);
      if (std::hypot(dx, dy) * (1.0 - 1e-12) >= best) continue;
      if (nd.level == tent_depth_) {
        best = std::min(best, tent_pair_distance(px, py, nd.a, nd.b));
        continue;
      }
      const double len = lam * (nd.b - nd.a);
      const double gl = nd.a + len;
      const double gr = nd.b - len;
      best = std::min(best, tent_pair_distance(px, py, gl, gr));
      const Node left{nd.a, gl, nd.level + 1};
      const Node right{gr, nd.b, nd.level + 1};
      // Push the farther child first so the nearer one is explored first.
      if (std::abs(px - 0.5 * (nd.a + gl)) <= std::abs(px - 0.5 * (gr + nd.b))) {
        stack[top++] = right;
        stack[top++] = left;
      } else {
        stack[top++] = left;
        stack[top++] = right;
      }
    }
    return best;
  }

  /// Upper tent vertices at the given truncation level, left to right.
  std::vector<Point2> tent_vertices(int depth) const {
    if (depth < 1 || depth > tent_depth_) throw DepthError("tent polyline depth outside [1, tent_depth]");
    if (depth > kIntervalListCap) throw DepthError("tent polyline depth exceeds the interval list cap");
    std::vector<Point2> v;
    v.reserve((std::size_t{4} << depth));
    bool first = true;
    double prev_b = 0.0;
    for_each_closed_interval(cantor_, depth, [&](double a, double b) {
      if (!first) v.push_back({0.5 * (prev_b + a), 0.5 * (a - prev_b)});
      v.push_back({a, 0.0});
      v.push_back({0.5 * (a + b), 0.5 * (b - a)});
      v.push_back({b, 0.0});
      prev_b = b;
      first = false;
    });
    return v;
  }

  /// Square boundary (closed) followed by the upper and lower tent graphs.
  std::vector<Polyline> boundary_polyline(int depth) const {
    std::vector<Polyline> out;
    out.emplace_back(std::vector<Point2>{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, true);
    std::vector<Point2> upper = tent_vertices(depth);
    std::vector<Point2> lower = upper;
    for (Point2& p : lower) p = mirror_y(p);
    out.emplace_back(std::move(upper));
    out.emplace_back(std::move(lower));
    return out;
  }
  std::vector<Polyline> boundary_polyline() const { return boundary_polyline(tent_depth_); }

 private:
  // Distance from (px, py), py >= 0, to the tent over [a, b] (apex at the midpoint).
  static double tent_pair_distance(double px, double py, double a, double b) {
    const Point2 p{px, py};
    const Point2 apex{0.5 * (a + b), 0.5 * (b - a)};
    return std::min(point_segment_distance(p, {a, 0.0}, apex), point_segment_distance(p, apex, {b, 0.0}));
  }

  // Tent classification for 0 <= x < 1 inside the square. Descends through
  // closed intervals; min(x - a, b - x) bounds d(x) from above at each level.
  Region classify_tent(double x, double ay, double band) const {
    const double lam = cantor_.lambda;
    detail::Span s{0.0, 1.0};
    for (int k = 0; k < tent_depth_; ++k) {
      if (ay > std::min(x - s.left, s.right - x) + band) return Region::interior;
      const detail::Span l = detail::left_child(s, lam);
      const detail::Span r = detail::right_child(s, lam);
      if (x > l.right && x < r.left) {
        const double d = std::min(x - l.right, r.left - x);
        if (ay > d + band) return Region::interior;
        if (ay < d - band) return Region::removed;
        return Region::boundary;
      }
      s = (x <= l.right) ? l : r;
    }
    const double upper = std::min(x - s.left, s.right - x);
    if (ay > upper + band) return Region::interior;
    return Region::boundary;
  }

  CantorParams cantor_;
  int tent_depth_;
  double band_ = 0.0;
  double distance_error_ = 0.0;
  std::vector<double> node_height_;
};

}  // namespace combdim
