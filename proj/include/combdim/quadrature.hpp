#pragma once

// Integration of dist(z)^(1-p) along polylines.
//
// A distance field supplies distance(z) and breakpoints(a, b): parameters in
// (0, 1) on the segment [a, b] where the distance may vanish or kink. Between
// breakpoints each half-piece is graded geometrically toward its breakpoint
// end and every grade is integrated with adaptive Gauss-Kronrod (G7/K15).
// The innermost tail uses the closed form for a linearly varying distance,
// which is exact for the piecewise linear boundaries used here.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "combdim/error.hpp"
#include "combdim/geometry.hpp"

namespace combdim {

/// Sobolev exponent p in (1, 2).
struct Exponent {
  double p;

  explicit Exponent(double value) : p(value) {
    if (!(value > 1.0 && value < 2.0)) throw PreconditionError("exponent p must lie in (1, 2)");
  }
  double one_minus() const { return 1.0 - p; }
  double two_minus() const { return 2.0 - p; }
};

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;
  std::int64_t subintervals = 0;

  IntegralResult& operator+=(const IntegralResult& o) {
    value += o.value;
    error += o.error;
    subintervals += o.subintervals;
    return *this;
  }
};

inline constexpr std::int64_t kSegmentBudget = std::int64_t{1} << 20;

namespace detail {

struct SegmentCtx {
  Point2 a, b;
  std::int64_t budget;
  std::int64_t used = 0;

  void charge() {
    if (++used > budget) throw ConvergenceError("subdivision budget exhausted", a.x, a.y, b.x, b.y);
  }
};

// Adaptive bisection over [lo, hi] with a local relative criterion. The
// integrand is positive, so local relative errors sum to a global one.
// abs_floor stops refinement where rounding noise dominates a piece whose
// contribution is already negligible.
template <class F>
IntegralResult adaptive_gk(F&& f, double lo, double hi, double rtol, SegmentCtx& ctx, double abs_floor = 0.0) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  IntegralResult out;
  struct Item {
    double lo, hi;
    int depth;
  };
  std::vector<Item> stack{{lo, hi, 0}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    ctx.charge();
    double err = 0.0;
    const double val = GK::integrate(f, it.lo, it.hi, 0, 0.0, &err);
    err *= 0.5 * (it.hi - it.lo);  // boost reports the error in reference units at depth 0
    if (!std::isfinite(val)) {
      throw ConvergenceError("non-finite integrand", ctx.a.x, ctx.a.y, ctx.b.x, ctx.b.y);
    }
    const double mid = 0.5 * (it.lo + it.hi);
    const bool splittable = mid > it.lo && mid < it.hi && it.depth < 200;
    if (err <= rtol * std::abs(val) || err <= abs_floor || err <= 1e-300 || !splittable) {
      out.value += val;
      out.error += err;
      ++out.subintervals;
      continue;
    }
    stack.push_back({mid, it.hi, it.depth + 1});
    stack.push_back({it.lo, mid, it.depth + 1});
  }
  return out;
}

// Integral of (d0 + alpha s)^(1-p) over [0, tau], alpha = (d_tau - d0) / tau.
inline double linear_tail(double d0, double dtau, double tau, double p) {
  const double q = 2.0 - p;
  const double alpha = (dtau - d0) / tau;
  if (std::abs(alpha) * tau <= 1e-9 * std::max(d0, dtau)) {
    return tau * std::pow(0.5 * (d0 + dtau), 1.0 - p);
  }
  return (std::pow(std::max(dtau, 0.0), q) - std::pow(d0, q)) / (alpha * q);
}

// Integral of (c s^beta)^(1-p) over [0, tau] with beta fitted from d at
// tau / 2 and tau. Falls back when the fit is not integrable.
inline double power_tail(double dhalf, double dtau, double tau, double p, double fallback) {
  double beta = std::log2(dtau / dhalf);
  // integer vanishing orders are exact; the fit only sees rounding noise
  if (std::abs(beta - std::round(beta)) < 1e-6) beta = std::round(beta);
  const double denom = beta * (1.0 - p) + 1.0;
  if (!std::isfinite(beta) || beta <= 0.0 || denom <= 1e-6) return fallback;
  return tau * std::pow(dtau, 1.0 - p) / denom;
}

// Integral over the half-piece of length lh that starts at `e` and runs in
// direction `dir`, graded toward e.
template <class Field>
IntegralResult graded_half(const Field& field, Point2 e, Point2 dir, double lh, double p, double tol,
                           SegmentCtx& ctx) {
  auto f = [&](double s) { return std::pow(field.distance(e + s * dir), 1.0 - p); };
  const double rtol = 0.1 * tol;
  const double d0 = field.distance(e);
  if (d0 > 1e-3 * lh) return adaptive_gk(f, 0.0, lh, rtol, ctx);

  // Below this offset e + s * dir no longer resolves s to useful precision.
  const double floor_s = 1e-7 * std::max({1.0, std::abs(e.x), std::abs(e.y)});
  IntegralResult out;
  double hi = lh;
  for (int k = 0; k < 4000; ++k) {
    const double lo = 0.5 * hi;
    out += adaptive_gk(f, lo, hi, rtol, ctx, 1e-3 * rtol * out.value);
    hi = lo;
    const double dtau = field.distance(e + hi * dir);
    const double tail = linear_tail(d0, dtau, hi, p);
    if (tail <= 1e-3 * tol * out.value || hi <= floor_s) {
      const double dhalf = field.distance(e + (0.5 * hi) * dir);
      double est = tail;
      double alt;
      if (d0 == 0.0 && dhalf > 0.0) {
        // d ~ c s^beta fitted on two scales; exact for linear and power-law vanishing
        const double dquarter = field.distance(e + (0.25 * hi) * dir);
        est = power_tail(dhalf, dtau, hi, p, tail);
        alt = tail;
        if (dquarter > 0.0) {
          const double b2 = std::log2(dhalf / dquarter);
          alt = power_tail(dquarter, dhalf, 0.5 * hi, p, 0.5 * tail) * std::exp2(b2 * (1.0 - p) + 1.0);
        }
      } else {
        // two linear pieces agree with one exactly when the field is linear there
        alt = linear_tail(d0, dhalf, 0.5 * hi, p) + linear_tail(dhalf, dtau, 0.5 * hi, p);
      }
      out.value += est;
      out.error += std::abs(est - alt) + 1e-3 * tol * est;
      return out;
    }
  }
  throw ConvergenceError("grading did not reach the tail threshold", ctx.a.x, ctx.a.y, ctx.b.x, ctx.b.y);
}

}  // namespace detail

/// Integral of dist^(1-p) over the straight segment [a, b].
template <class Field>
IntegralResult segment_integral(const Field& field, Point2 a, Point2 b, double p, double tol,
                                std::int64_t budget = kSegmentBudget) {
  const double len = distance(a, b);
  if (len == 0.0) return {};
  detail::SegmentCtx ctx{a, b, budget};
  std::vector<double> cuts = field.breakpoints(a, b);
  cuts.push_back(0.0);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> ts;
  for (double t : cuts) {
    t = std::clamp(t, 0.0, 1.0);
    if (ts.empty() || (t - ts.back()) * len > 1e-15) ts.push_back(t);
  }
  if (ts.back() != 1.0) ts.back() = 1.0;

  IntegralResult out;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    // Both halves measure their parameter from their own singular end.
    const Point2 s0 = ts[i] == 0.0 ? a : a + ts[i] * (b - a);
    const Point2 s1 = ts[i + 1] == 1.0 ? b : a + ts[i + 1] * (b - a);
    const double piece = distance(s0, s1);
    if (piece == 0.0) continue;
    const Point2 dir = (1.0 / piece) * (s1 - s0);
    const double lh = 0.5 * piece;
    out += detail::graded_half(field, s0, dir, lh, p, tol, ctx);
    out += detail::graded_half(field, s1, -1.0 * dir, lh, p, tol, ctx);
  }
  return out;
}

/// Integral of dist^(1-p) along every segment of a polyline.
template <class Field>
IntegralResult field_integral(const Polyline& curve, Exponent p, const Field& field, double tol,
                              std::int64_t budget = kSegmentBudget) {
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  IntegralResult out;
  for (std::size_t k = 0; k < curve.segment_count(); ++k) {
    out += segment_integral(field, curve.segment_start(k), curve.segment_end(k), p.p, tol, budget);
  }
  return out;
}

/// A field given by a callable; breakpoints are fixed points in the plane
/// that are projected onto each segment.
template <class Dist>
struct FunctionField {
  Dist dist;
  std::vector<Point2> singular_points;

  double distance(Point2 z) const { return dist(z); }
  std::vector<double> breakpoints(Point2 a, Point2 b) const {
    std::vector<double> out;
    const Point2 d = b - a;
    const double len2 = d.x * d.x + d.y * d.y;
    if (len2 == 0.0) return out;
    for (Point2 s : singular_points) {
      const double t = ((s.x - a.x) * d.x + (s.y - a.y) * d.y) / len2;
      if (t > 0.0 && t < 1.0 && point_segment_distance(s, a, b) <= 1e-14 * std::sqrt(len2)) out.push_back(t);
    }
    return out;
  }
};

template <class Dist>
FunctionField<Dist> make_field(Dist dist, std::vector<Point2> singular_points = {}) {
  return FunctionField<Dist>{std::move(dist), std::move(singular_points)};
}

}  // namespace combdim
