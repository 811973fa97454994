#pragma once

// Dimension bound for two-sided boundary points and the sharpness calculus
// on the comb family. Logarithms are natural unless a base is written.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "combdim/curve.hpp"
#include "combdim/error.hpp"

namespace combdim {

namespace detail {
inline void require_p(double p) {
  if (!(p > 1.0 && p < 2.0)) throw PreconditionError("p must lie in (1, 2)");
}
}  // namespace detail

struct BoundReport {
  double p = 0.0;
  double C = 0.0;
  double rhs = 0.0;
  double scaled_gap = 0.0;  // C * (2 - p - rhs)
  bool admissible = false;
};

/// 2 - p + log2(1 - (2^(p-1) - 1) / (2^(5-2p) C)).
inline BoundReport main_bound(double p, double C) {
  detail::require_p(p);
  if (!(C >= 1.0)) throw PreconditionError("C must be at least 1");
  BoundReport r{p, C};
  const double x = (std::pow(2.0, p - 1.0) - 1.0) / (std::pow(2.0, 5.0 - 2.0 * p) * C);
  r.admissible = x < 1.0;
  if (!r.admissible) {
    r.rhs = -HUGE_VAL;
    r.scaled_gap = HUGE_VAL;
    return r;
  }
  const double log_term = std::log1p(-x) / std::log(2.0);
  r.rhs = 2.0 - p + log_term;
  r.scaled_gap = -C * log_term;
  return r;
}

/// (2^(p-1) - 1) 2^(2p-5) / ln 2, the limit of C (2 - p - rhs) as C grows.
inline double m1_floor(double p) {
  detail::require_p(p);
  return (std::pow(2.0, p - 1.0) - 1.0) * std::pow(2.0, 2.0 * p - 5.0) / std::log(2.0);
}

/// c / ((2-p) lambda^(2-p) (1 - 2 lambda^(2-p))).
inline double curve_constant_bound(double p, double lambda, double c) {
  detail::require_p(p);
  if (!(c > 0.0)) throw PreconditionError("c must be positive");
  if (!(lambda > 0.0 && lambda < 0.5)) throw PreconditionError("lambda must lie in (0, 1/2)");
  require_admissible(lambda, p);
  const double u = std::pow(lambda, 2.0 - p);
  return c / ((2.0 - p) * u * (1.0 - 2.0 * u));
}

/// Coefficient of (2-p)(1 - 2 lambda^(2-p)) in f_p; M2 / (4c) = 2 / ln 2.
inline double sharpness_coefficient() { return 2.0 / std::log(2.0); }

/// f_p(lambda) = 2 - p - k (2-p)(1 - 2 lambda^(2-p)) + ln 2 / ln lambda.
inline double f_p_eval(double lambda, double p, double coefficient = sharpness_coefficient()) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw PreconditionError("lambda must lie in (0, 1)");
  const double q = 2.0 - p;
  return q - coefficient * q * (1.0 - 2.0 * std::pow(lambda, q)) + std::log(2.0) / std::log(lambda);
}

/// [1/2 * 2^(1/(p-2)), 2^(1/(p-2))): where lambda^(2-p) runs over [2^(p-3), 1/2).
inline double sharp_lambda_lo(double p) { return 0.5 * std::pow(2.0, 1.0 / (p - 2.0)); }
inline double sharp_lambda_hi(double p) { return std::pow(2.0, 1.0 / (p - 2.0)); }

/// C(p) = c / ((2-p) 2^(p-3) (1 - 2^(p-2))).
inline double c_threshold(double p, double c) {
  detail::require_p(p);
  if (!(c > 0.0)) throw PreconditionError("c must be positive");
  return c / ((2.0 - p) * std::pow(2.0, p - 3.0) * (1.0 - std::pow(2.0, p - 2.0)));
}

/// The lambda in the sharpness interval with curve_constant_bound(p, lambda, c) = C.
/// The bound is strictly increasing there, so bisection is bracketed.
inline double lambda_for_C(double p, double C, double c) {
  detail::require_p(p);
  const double lo = sharp_lambda_lo(p);
  const double hi = sharp_lambda_hi(p);
  const double threshold = c_threshold(p, c);
  if (C < threshold) {
    throw NoRootError("C = " + std::to_string(C) + " lies below the threshold C(p) = " + std::to_string(threshold));
  }
  // Expressed through u = lambda^(2-p) so the pole at u = 1/2 stays outside.
  const double q = 2.0 - p;
  auto g = [&](double lam) {
    const double u = std::pow(lam, q);
    return c - C * q * u * (1.0 - 2.0 * u);
  };
  if (g(lo) >= 0.0) return lo;  // C equals the threshold
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
  std::uintmax_t iters = 400;
  const auto [a, b] = boost::math::tools::bisect(g, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

struct SharpnessViolation {
  char check = ' ';  // 'a', 'b', 'c' or 'd'
  double lambda = 0.0;
  double C = 0.0;
  double value = 0.0;
};

struct SharpnessReport {
  double p = 0.0;
  double c = 0.0;
  double coefficient = 0.0;
  double M2 = 0.0;
  double C_threshold = 0.0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  int grid_size = 0;
  double f_max = 0.0;          // (a) over the half-open grid
  double f_endpoint = 0.0;     // (b)
  double fprime_min = 0.0;     // (c) forward differences
  double dim_margin_min = 0.0;  // (d) min over the C grid of exact_dim - target
  bool pass_a = false, pass_b = false, pass_c = false, pass_d = false;
  std::vector<double> f_grid;
  std::vector<double> C_grid;
  std::vector<double> lambda_C;
  std::vector<double> exact_dim;
  std::vector<double> target;
  std::vector<SharpnessViolation> violations;

  bool pass() const { return pass_a && pass_b && pass_c && pass_d; }
};

inline constexpr double kSharpFTol = 1e-12;
inline constexpr double kSharpDerivTol = -1e-9;

/// (a) f_p <= 1e-12 on a grid of the sharpness interval, (b) f_p vanishes at
/// its right end, (c) forward differences of f_p are >= -1e-9, (d) for C on a
/// geometric grid above C(p), log 2 / -log lambda_C >= 2 - p - M2 / C with
/// M2 = 4 c k (k = 2/ln2 gives 8c/ln2). A tampered coefficient k enters
/// both f_p and M2.
inline SharpnessReport verify_sharpness(double p, double c, int grid_size,
                                        double coefficient = sharpness_coefficient(), int c_grid_points = 41) {
  detail::require_p(p);
  if (grid_size < 2) throw PreconditionError("grid_size must be at least 2");
  SharpnessReport r;
  r.p = p;
  r.c = c;
  r.coefficient = coefficient;
  r.M2 = 4.0 * c * coefficient;
  r.C_threshold = c_threshold(p, c);
  r.lambda_lo = sharp_lambda_lo(p);
  r.lambda_hi = sharp_lambda_hi(p);
  r.grid_size = grid_size;

  const double step = (r.lambda_hi - r.lambda_lo) / grid_size;
  std::vector<double> lam(static_cast<std::size_t>(grid_size) + 1);
  for (int k = 0; k < grid_size; ++k) lam[static_cast<std::size_t>(k)] = r.lambda_lo + step * k;
  lam.back() = r.lambda_hi;
  r.f_grid.resize(lam.size());
  for (std::size_t k = 0; k < lam.size(); ++k) r.f_grid[k] = f_p_eval(lam[k], p, coefficient);

  r.f_max = -HUGE_VAL;
  for (std::size_t k = 0; k + 1 < lam.size(); ++k) {
    r.f_max = std::max(r.f_max, r.f_grid[k]);
    if (r.f_grid[k] > kSharpFTol) r.violations.push_back({'a', lam[k], 0.0, r.f_grid[k]});
  }
  r.pass_a = r.f_max <= kSharpFTol;

  r.f_endpoint = r.f_grid.back();
  r.pass_b = std::abs(r.f_endpoint) <= kSharpFTol;
  if (!r.pass_b) r.violations.push_back({'b', r.lambda_hi, 0.0, r.f_endpoint});

  r.fprime_min = HUGE_VAL;
  for (std::size_t k = 0; k + 1 < lam.size(); ++k) {
    const double d = (r.f_grid[k + 1] - r.f_grid[k]) / (lam[k + 1] - lam[k]);
    r.fprime_min = std::min(r.fprime_min, d);
    if (d < kSharpDerivTol) r.violations.push_back({'c', lam[k], 0.0, d});
  }
  r.pass_c = r.fprime_min >= kSharpDerivTol;

  r.dim_margin_min = HUGE_VAL;
  for (int m = 0; m < c_grid_points; ++m) {
    const double C = r.C_threshold * std::exp2(0.25 * m);
    const double lc = lambda_for_C(p, C, c);
    const double dim = std::log(2.0) / -std::log(lc);
    const double tgt = 2.0 - p - r.M2 / C;
    r.C_grid.push_back(C);
    r.lambda_C.push_back(lc);
    r.exact_dim.push_back(dim);
    r.target.push_back(tgt);
    r.dim_margin_min = std::min(r.dim_margin_min, dim - tgt);
    if (dim < tgt) r.violations.push_back({'d', lc, C, dim - tgt});
  }
  r.pass_d = r.dim_margin_min >= 0.0;
  return r;
}

/// Bound consistency on the comb family: the exact Cantor dimension against
/// the bound evaluated at C_ref = max(C_emp, curve_constant_bound(p, lambda, c)).
struct ConsistencyRecord {
  double lambda = 0.0;
  double p = 0.0;
  double C_ref = 0.0;
  double exact_dim = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - exact_dim
};

inline ConsistencyRecord bound_consistency(double lambda, double p, double c, double c_empirical = 0.0) {
  ConsistencyRecord r{lambda, p};
  r.C_ref = std::max(c_empirical, curve_constant_bound(p, lambda, c));
  r.exact_dim = std::log(2.0) / -std::log(lambda);
  r.rhs = main_bound(p, r.C_ref).rhs;
  r.margin = r.rhs - r.exact_dim;
  return r;
}

}  // namespace combdim
