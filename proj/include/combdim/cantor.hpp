#pragma once

// Interval combinatorics and certified point distances for the middle-gap
// Cantor set generated by x -> lambda*x and x -> lambda*x + 1 - lambda.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "combdim/error.hpp"

namespace combdim {

/// Levels above this are never materialized as interval lists.
inline constexpr int kIntervalListCap = 24;

struct CantorParams {
  double lambda;
  int max_depth;

  CantorParams(double ratio, int depth) : lambda(ratio), max_depth(depth) {
    if (!(ratio > 0.0 && ratio < 0.5)) {
      throw PreconditionError("Cantor ratio must lie in (0, 1/2), got " + std::to_string(ratio));
    }
    if (depth < 1) throw PreconditionError("Cantor depth must be at least 1");
  }

  /// Hausdorff dimension log 2 / (-log lambda).
  double dimension() const { return std::log(2.0) / -std::log(lambda); }
};

enum class IntervalKind { closed, gap };

struct LevelInterval {
  int level;
  std::int64_t index;  // 1-based, left to right
  IntervalKind kind;
  double left;
  double right;

  double length() const { return right - left; }
  double midpoint() const { return 0.5 * (left + right); }
};

namespace detail {

struct Span {
  double left;
  double right;
};

// Children are images of the parent under the two contractions, computed
// affinely from the parent endpoints so that enumeration and distance
// recursion walk the same floating-point orbit.
inline Span left_child(Span s, double lambda) { return {s.left, s.left + lambda * (s.right - s.left)}; }
inline Span right_child(Span s, double lambda) { return {s.right - lambda * (s.right - s.left), s.right}; }

template <class Visit>
void visit_closed(Span s, int level, int target, double lambda, Visit& visit) {
  if (level == target) {
    visit(s);
    return;
  }
  visit_closed(left_child(s, lambda), level + 1, target, lambda, visit);
  visit_closed(right_child(s, lambda), level + 1, target, lambda, visit);
}

inline void check_level(const CantorParams& params, int j) {
  if (j > params.max_depth) {
    throw DepthError("level " + std::to_string(j) + " exceeds max_depth " + std::to_string(params.max_depth));
  }
  if (j > kIntervalListCap) {
    throw DepthError("level " + std::to_string(j) + " exceeds the interval list cap " +
                     std::to_string(kIntervalListCap));
  }
}

}  // namespace detail

/// Calls visit(left, right) for every closed level-j interval, left to right,
/// without materializing a list. No cap applies beyond max_depth.
template <class Visit>
void for_each_closed_interval(const CantorParams& params, int j, Visit visit) {
  if (j < 0 || j > params.max_depth) {
    throw DepthError("level " + std::to_string(j) + " outside [0, " + std::to_string(params.max_depth) + "]");
  }
  auto adapter = [&](detail::Span s) { visit(s.left, s.right); };
  detail::visit_closed(detail::Span{0.0, 1.0}, 0, j, params.lambda, adapter);
}

/// The 2^j closed intervals left after j construction steps.
inline std::vector<LevelInterval> level_intervals(const CantorParams& params, int j) {
  if (j < 0) throw DepthError("negative level");
  detail::check_level(params, j);
  std::vector<LevelInterval> out;
  out.reserve(std::size_t{1} << j);
  for_each_closed_interval(params, j, [&](double a, double b) {
    out.push_back({j, static_cast<std::int64_t>(out.size()) + 1, IntervalKind::closed, a, b});
  });
  return out;
}

/// The 2^(j-1) open intervals removed at step j.
inline std::vector<LevelInterval> gap_intervals(const CantorParams& params, int j) {
  if (j < 1) throw DepthError("no interval is removed at level 0");
  detail::check_level(params, j);
  std::vector<LevelInterval> out;
  out.reserve(std::size_t{1} << (j - 1));
  for_each_closed_interval(params, j - 1, [&](double a, double b) {
    const detail::Span s{a, b};
    const double gl = detail::left_child(s, params.lambda).right;
    const double gr = detail::right_child(s, params.lambda).left;
    out.push_back({j, static_cast<std::int64_t>(out.size()) + 1, IntervalKind::gap, gl, gr});
  });
  return out;
}

/// Sorted, duplicate-free endpoints of the level-j closed intervals.
inline std::vector<double> level_endpoints(const CantorParams& params, int j) {
  std::vector<double> pts;
  for_each_closed_interval(params, j, [&](double a, double b) {
    if (pts.empty() || pts.back() != a) pts.push_back(a);
    pts.push_back(b);
  });
  return pts;
}

/// A value together with an absolute error bound.
struct CertifiedDistance {
  double value = 0.0;
  double error = 0.0;

  double lower() const { return std::max(0.0, value - error); }
  double upper() const { return value + error; }
};

/// Distance from x to the Cantor set, descending through closed intervals up
/// to `depth` levels. Exact (error 0) outside [0, 1] or inside a gap of level
/// at most `depth`; otherwise x sits in a level-depth interval [a, b] whose
/// endpoints are Cantor points, the true distance lies in [0, min(x-a, b-x)],
/// and the midpoint of that range is returned.
inline CertifiedDistance cantor_distance(double x, double lambda, int depth) {
  if (x <= 0.0) return {-x, 0.0};
  if (x >= 1.0) return {x - 1.0, 0.0};
  detail::Span s{0.0, 1.0};
  for (int k = 0; k < depth; ++k) {
    const detail::Span l = detail::left_child(s, lambda);
    const detail::Span r = detail::right_child(s, lambda);
    if (x > l.right && x < r.left) return {std::min(x - l.right, r.left - x), 0.0};
    s = (x <= l.right) ? l : r;
  }
  const double m = std::min(x - s.left, s.right - x);
  return {0.5 * m, 0.5 * m};
}

inline CertifiedDistance cantor_distance(double x, const CantorParams& params) {
  return cantor_distance(x, params.lambda, params.max_depth);
}

}  // namespace combdim
