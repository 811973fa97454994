#pragma once

// Curve-condition machinery on the comb domain: closed-form values of the
// distance integral, the three-case connecting curves, and integration of
// dist(z, boundary)^(1-p) along them.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "combdim/cantor.hpp"
#include "combdim/comb_domain.hpp"
#include "combdim/error.hpp"
#include "combdim/geometry.hpp"
#include "combdim/quadrature.hpp"

namespace combdim {

// ---------------------------------------------------------------------------
// Closed forms

/// 2 * lambda^(2-p); the series over nested gaps converges iff this is < 1.
inline double series_ratio(double lambda, double p) { return 2.0 * std::pow(lambda, 2.0 - p); }

/// Largest admissible p for a given lambda: 2 - log 2 / log(1/lambda).
inline double admissible_p_threshold(double lambda) { return 2.0 - std::log(2.0) / std::log(1.0 / lambda); }

inline bool admissible(double lambda, double p) { return series_ratio(lambda, p) < 1.0; }

inline void require_admissible(double lambda, double p) {
  if (!admissible(lambda, p)) {
    throw AdmissibilityError("2*lambda^(2-p) = " + std::to_string(series_ratio(lambda, p)) +
                             " >= 1; need p < 2 - log2/log(1/lambda) = " +
                             std::to_string(admissible_p_threshold(lambda)));
  }
}

/// Profile value 2^((1-p)/2) L^(2-p) / (2-p).
inline double segment_profile_integral(double length, Exponent p) {
  if (length < 0.0) throw PreconditionError("length must be non-negative");
  if (length == 0.0) return 0.0;
  return std::pow(2.0, 0.5 * p.one_minus()) * std::pow(length, p.two_minus()) / p.two_minus();
}

/// Length (1 - 2 lambda) lambda^(j-1) of a level-j gap.
inline double gap_length(int j, double lambda) { return (1.0 - 2.0 * lambda) * std::pow(lambda, j - 1); }

/// 2^(3(p-1)/2) / (2-p) * |gap_j|^(2-p), the integral of (d/sqrt2)^(1-p) across a level-j gap.
inline double gap_closed_form(int j, Exponent p, double lambda) {
  if (j < 1) throw DepthError("gap level must be at least 1");
  return std::pow(2.0, 1.5 * (p.p - 1.0)) / p.two_minus() * std::pow(gap_length(j, lambda), p.two_minus());
}

/// Sum of gap_closed_form over every gap inside one level-j closed interval.
inline double interval_series_closed_form(int j, Exponent p, double lambda) {
  require_admissible(lambda, p.p);
  const double q = p.two_minus();
  return std::pow(2.0, 1.5 * (p.p - 1.0)) / q * std::pow(1.0 - 2.0 * lambda, q) * std::pow(lambda, q * j) /
         (1.0 - series_ratio(lambda, p.p));
}

/// Truncated double sum: sum over K levels k = j..j+K-1 of the 2^(k-j) gaps of level k+1.
inline double interval_series_partial_sum(int j, Exponent p, double lambda, int terms) {
  double total = 0.0;
  for (int k = j; k < j + terms; ++k) {
    const double per_gap = gap_closed_form(k + 1, p, lambda);
    total += std::ldexp(per_gap, k - j);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Exact axis integral

namespace detail {

// Integral over [t1, t2] of (t / sqrt2)^(1-p), t measured from a gap edge.
inline double axis_profile(double t1, double t2, double p) {
  const double k = std::pow(2.0, 0.5 * (p - 1.0)) / (2.0 - p);
  return k * (std::pow(t2, 2.0 - p) - std::pow(t1, 2.0 - p));
}

// Integral over [u, v] of (min(x - gl, gr - x) / sqrt2)^(1-p), with [u, v] inside [gl, gr].
inline double gap_partial(double gl, double gr, double u, double v, double p) {
  const double mid = 0.5 * (gl + gr);
  double total = 0.0;
  if (u < mid) total += axis_profile(u - gl, std::min(v, mid) - gl, p);
  if (v > mid) total += axis_profile(gr - std::min(v, gr), gr - std::max(u, mid), p);
  return total;
}

inline void axis_recurse(Span s, int level, double u, double v, Exponent p, double lambda, IntegralResult& out) {
  const double lo = std::max(u, s.left);
  const double hi = std::min(v, s.right);
  if (!(hi > lo)) return;
  if (lo == s.left && hi == s.right) {
    out.value += interval_series_closed_form(level, p, lambda);
    return;
  }
  const Span l = left_child(s, lambda);
  const Span r = right_child(s, lambda);
  if (!(l.right > s.left && r.left > l.right && r.right > r.left) || level >= 4000) {
    // Floating point can no longer split this interval: bound by [0, S].
    const double full = interval_series_closed_form(level, p, lambda);
    out.value += 0.5 * full;
    out.error += 0.5 * full;
    return;
  }
  axis_recurse(l, level + 1, u, v, p, lambda, out);
  const double glo = std::max(lo, l.right);
  const double ghi = std::min(hi, r.left);
  if (ghi > glo) {
    if (glo == l.right && ghi == r.left) {
      out.value += gap_closed_form(level + 1, p, lambda);
    } else {
      out.value += gap_partial(l.right, r.left, glo, ghi, p.p);
    }
  }
  axis_recurse(r, level + 1, u, v, p, lambda, out);
}

}  // namespace detail

/// Integral over [u, v] x {0}, inside [0, 1], of (d(x, C)/sqrt2)^(1-p). On the
/// axis the distance to the untruncated tent graph is exactly d(x, C)/sqrt2,
/// since the graph is 1-Lipschitz and is the 45 degree V near every gap edge.
inline IntegralResult axis_integral_exact(double u, double v, Exponent p, double lambda) {
  if (u > v) std::swap(u, v);
  u = std::max(u, 0.0);
  v = std::min(v, 1.0);
  IntegralResult out;
  if (!(v > u)) return out;
  // Only the inadmissible full-interval sums need the series.
  detail::axis_recurse(detail::Span{0.0, 1.0}, 0, u, v, p, lambda, out);
  return out;
}

// ---------------------------------------------------------------------------
// Distance field on the comb domain

enum class AxisMode { exact, quadrature };

struct DomainField {
  const CombDomain* domain;

  double distance(Point2 z) const { return domain->boundary_distance(z).value; }

  std::vector<double> breakpoints(Point2 a, Point2 b) const {
    std::vector<double> out;
    const Point2 d = b - a;
    const double len2 = d.x * d.x + d.y * d.y;
    if (len2 == 0.0) return out;
    const double len = std::sqrt(len2);
    auto add_point = [&](Point2 s) {
      const double t = ((s.x - a.x) * d.x + (s.y - a.y) * d.y) / len2;
      if (t > 0.0 && t < 1.0 && point_segment_distance(s, a, b) <= 1e-13 * std::max(1.0, len)) out.push_back(t);
    };
    for (Point2 c : {Point2{-1, -1}, Point2{1, -1}, Point2{1, 1}, Point2{-1, 1}, Point2{1, 0}, Point2{0, 0}}) add_point(c);
    if (a.y != b.y && ((a.y <= 0.0 && b.y >= 0.0) || (a.y >= 0.0 && b.y <= 0.0))) {
      const double t = a.y / (a.y - b.y);
      const double x = a.x + t * d.x;
      if (t > 0.0 && t < 1.0 && x >= 0.0 && x <= 1.0) out.push_back(t);
    }
    if (a.y == 0.0 && b.y == 0.0) {
      // Zeros of the truncated distance: endpoints of the tent-depth intervals.
      const double lo = std::min(a.x, b.x);
      const double hi = std::max(a.x, b.x);
      std::vector<double> xs;
      collect_endpoints(detail::Span{0.0, 1.0}, 0, lo, hi, xs);
      for (double x : xs) out.push_back((x - a.x) / d.x);
    }
    return out;
  }

 private:
  static constexpr std::size_t kMaxAxisBreakpoints = std::size_t{1} << 16;

  void collect_endpoints(detail::Span s, int level, double lo, double hi, std::vector<double>& xs) const {
    if (s.right < lo || s.left > hi) return;
    if (level == domain->tent_depth()) {
      for (double x : {s.left, s.right}) {
        if (x > lo && x < hi) xs.push_back(x);
      }
      if (xs.size() > kMaxAxisBreakpoints) {
        throw ConvergenceError("too many singular points on an axis segment; use the exact axis mode", lo, 0.0, hi,
                               0.0);
      }
      return;
    }
    collect_endpoints(detail::left_child(s, domain->lambda()), level + 1, lo, hi, xs);
    collect_endpoints(detail::right_child(s, domain->lambda()), level + 1, lo, hi, xs);
  }
};

struct IntegrationOptions {
  double tol = 1e-8;
  AxisMode axis_mode = AxisMode::exact;
  int complement_samples = 64;  // per segment; 0 disables the check
  std::int64_t budget = kSegmentBudget;
};

inline bool in_open_square(Point2 z) { return std::abs(z.x) < 1.0 && std::abs(z.y) < 1.0; }

/// Samples each segment and throws PreconditionError at the first interior point.
inline void check_in_complement(const Polyline& curve, const CombDomain& domain, int samples_per_segment) {
  for (std::size_t k = 0; k < curve.segment_count(); ++k) {
    const Point2 a = curve.segment_start(k);
    const Point2 b = curve.segment_end(k);
    for (int i = 0; i <= samples_per_segment; ++i) {
      const double t = static_cast<double>(i) / samples_per_segment;
      const Point2 z = a + t * (b - a);
      if (domain.contains(z) == Region::interior) {
        throw PreconditionError("curve enters Omega at (" + std::to_string(z.x) + ", " + std::to_string(z.y) + ")");
      }
    }
  }
}

/// Integral of dist(z, boundary)^(1-p) along a curve in the complement of Omega.
/// Axis segments inside [0, 1] use the exact self-similar evaluation unless
/// the quadrature axis mode is requested.
inline IntegralResult polyline_integral(const Polyline& curve, Exponent p, const CombDomain& domain,
                                        const IntegrationOptions& opt = {}) {
  if (!(opt.tol > 0.0)) throw PreconditionError("tolerance must be positive");
  if (opt.complement_samples > 0) check_in_complement(curve, domain, opt.complement_samples);
  const DomainField field{&domain};
  IntegralResult out;
  for (std::size_t k = 0; k < curve.segment_count(); ++k) {
    const Point2 a = curve.segment_start(k);
    const Point2 b = curve.segment_end(k);
    if (opt.axis_mode == AxisMode::exact && a.y == 0.0 && b.y == 0.0) {
      const double lo = std::min(a.x, b.x);
      const double hi = std::max(a.x, b.x);
      out += axis_integral_exact(lo, hi, p, domain.lambda());
      // Axis parts outside [0, 1] see only the walls.
      if (hi > 1.0) out += segment_integral(field, {std::max(lo, 1.0), 0.0}, {hi, 0.0}, p.p, opt.tol, opt.budget);
      if (lo < 0.0) out += segment_integral(field, {lo, 0.0}, {std::min(hi, 0.0), 0.0}, p.p, opt.tol, opt.budget);
      continue;
    }
    out += segment_integral(field, a, b, p.p, opt.tol, opt.budget);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Connecting curves

enum class CurveCase { outside, tent, mixed };

inline const char* to_string(CurveCase c) {
  switch (c) {
    case CurveCase::outside: return "i";
    case CurveCase::tent: return "ii";
    case CurveCase::mixed: return "iii";
  }
  return "?";
}

struct Connection {
  Polyline curve;
  CurveCase kind;
};

namespace detail {

// Does the segment [a, b] meet the open square (shrunk slightly)?
inline bool meets_open_square(Point2 a, Point2 b) {
  const double lim = 1.0 - 1e-12;
  double t0 = 0.0;
  double t1 = 1.0;
  const Point2 d = b - a;
  const std::array<double, 4> pp{-d.x, d.x, -d.y, d.y};
  const std::array<double, 4> qq{a.x + lim, lim - a.x, a.y + lim, lim - a.y};
  for (int i = 0; i < 4; ++i) {
    if (pp[i] == 0.0) {
      if (qq[i] <= 0.0) return false;
      continue;
    }
    const double r = qq[i] / pp[i];
    if (pp[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
    if (t0 >= t1) return false;
  }
  return t0 < t1;
}

// Two-piece +-45 degree hop from p to q; u_first picks the diagonal order.
inline std::array<Point2, 3> hop(Point2 p, Point2 q, bool u_first) {
  const double du = (q.x - p.x) + (q.y - p.y);
  const double dv = (q.x - p.x) - (q.y - p.y);
  const Point2 mu{0.5 * du, 0.5 * du};
  const Point2 mv{0.5 * dv, -0.5 * dv};
  return {p, p + (u_first ? mu : mv), q};
}

}  // namespace detail

/// Shortest path of +-45 degree pieces between two points of the closed
/// exterior of the square, routed around it through at most two corners.
inline Polyline connect_outside(Point2 x, Point2 y) {
  static const std::array<Point2, 4> corners{Point2{-1, -1}, Point2{1, -1}, Point2{1, 1}, Point2{-1, 1}};
  std::optional<Polyline> best;
  double best_len = 0.0;
  std::size_t best_pieces = 0;
  double best_clear = 0.0;
  // clearance from the square at vertices and midpoints; breaks length ties
  // symmetrically and favours routes with the smaller integrand
  auto clearance = [](const Polyline& pl) {
    auto d = [](Point2 z) { return std::hypot(std::max(std::abs(z.x) - 1.0, 0.0), std::max(std::abs(z.y) - 1.0, 0.0)); };
    double c = 0.0;
    for (std::size_t k = 0; k < pl.segment_count(); ++k) {
      c += d(pl.segment_start(k)) + d(0.5 * (pl.segment_start(k) + pl.segment_end(k)));
    }
    return c;
  };

  auto consider = [&](const std::vector<Point2>& waypoints, unsigned orders) {
    std::vector<Point2> verts{waypoints.front()};
    for (std::size_t h = 0; h + 1 < waypoints.size(); ++h) {
      const auto hp = detail::hop(waypoints[h], waypoints[h + 1], ((orders >> h) & 1u) != 0);
      verts.push_back(hp[1]);
      verts.push_back(hp[2]);
    }
    Polyline cand(verts);
    for (std::size_t k = 0; k < cand.segment_count(); ++k) {
      if (detail::meets_open_square(cand.segment_start(k), cand.segment_end(k))) return;
    }
    const std::size_t pieces = cand.straight_piece_count();
    if (pieces > 4) return;
    const double len = cand.length();
    const double clear = clearance(cand);
    const bool tie = std::abs(len - best_len) <= 1e-12;
    if (!best || len < best_len - 1e-12 || (tie && pieces < best_pieces) ||
        (tie && pieces == best_pieces && clear > best_clear + 1e-12)) {
      best = cand;
      best_len = len;
      best_pieces = pieces;
      best_clear = clear;
    }
  };

  for (unsigned o = 0; o < 2; ++o) consider({x, y}, o);
  for (const Point2& c : corners) {
    for (unsigned o = 0; o < 4; ++o) consider({x, c, y}, o);
  }
  for (const Point2& c1 : corners) {
    for (const Point2& c2 : corners) {
      if (c1 == c2) continue;
      for (unsigned o = 0; o < 8; ++o) consider({x, c1, c2, y}, o);
    }
  }
  if (!best) throw Error("no +-45 degree route found around the square");
  return *best;
}

/// Connecting curve in the complement of Omega following the three
/// cases: both endpoints outside the open square, both in the tent, or mixed
/// (through w = (1, 0)).
inline Connection connect(Point2 x, Point2 y, const CombDomain& domain) {
  for (Point2 z : {x, y}) {
    if (domain.contains(z) == Region::interior) {
      throw PreconditionError("endpoint (" + std::to_string(z.x) + ", " + std::to_string(z.y) + ") lies in Omega");
    }
  }
  const bool xin = in_open_square(x);
  const bool yin = in_open_square(y);
  if (!xin && !yin) return {connect_outside(x, y), CurveCase::outside};
  if (xin && yin) {
    return {Polyline({x, {x.x, 0.0}, {y.x, 0.0}, y}), CurveCase::tent};
  }
  const Point2 inner = xin ? x : y;
  const Point2 outer = xin ? y : x;
  const Point2 w{1.0, 0.0};
  std::vector<Point2> v{inner, {inner.x, 0.0}, w};
  const Polyline tail = connect_outside(w, outer);
  v.insert(v.end(), tail.vertices().begin() + 1, tail.vertices().end());
  Polyline curve(std::move(v));
  return {xin ? curve : curve.reversed(), CurveCase::mixed};
}

}  // namespace combdim
