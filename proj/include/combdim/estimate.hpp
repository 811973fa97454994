#pragma once

// Empirical curve-condition constant: the largest ratio
// integral / |x - y|^(2 - p) over seeded random complement pairs, using the
// three-case connecting curves. This is a lower estimate of the supremum.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "combdim/comb_domain.hpp"
#include "combdim/curve.hpp"
#include "combdim/error.hpp"
#include "combdim/parallel.hpp"

namespace combdim {

struct PairRecord {
  Point2 x;
  Point2 y;
  CurveCase kind = CurveCase::tent;
  double integral = 0.0;
  double integral_error = 0.0;
  double ratio = 0.0;
};

struct CEstimate {
  double value = 0.0;
  std::int64_t pair_count = 0;
  std::uint64_t seed = 0;
  std::int64_t worst_index = -1;
  Point2 worst_x;
  Point2 worst_y;
  CurveCase worst_case = CurveCase::tent;
  std::vector<PairRecord> pairs;
};

/// An integration failure, tagged with the pair that caused it.
struct PairFailure : Error {
  PairFailure(Point2 px, Point2 py, const std::string& what)
      : Error("pair (" + std::to_string(px.x) + ", " + std::to_string(px.y) + ") - (" + std::to_string(py.x) + ", " +
              std::to_string(py.y) + "): " + what),
        x(px),
        y(py) {}
  Point2 x;
  Point2 y;
};

struct SamplingWeights {
  double tent = 0.6;
  double outside = 0.2;
  double mixed = 0.2;
};

namespace detail {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  // 53 random bits; avoids implementation-defined distribution algorithms.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline Point2 sample_tent_point(const CombDomain& domain, std::mt19937_64& rng) {
  const double h = 0.5 * (1.0 - 2.0 * domain.lambda());
  for (;;) {
    const double x = uniform(rng, 0.0, 1.0);
    const double y = uniform(rng, -h, h);
    if (std::abs(y) <= cantor_distance(x, domain.cantor()).lower()) return {x, y};
  }
}

inline Point2 sample_outside_point(std::mt19937_64& rng) {
  for (;;) {
    const Point2 z{uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0)};
    if (std::max(std::abs(z.x), std::abs(z.y)) >= 1.0) return z;
  }
}

}  // namespace detail

/// Draws n pairs from one seeded stream; pair k is the same for every n > k.
inline std::vector<std::pair<Point2, Point2>> sample_pairs(const CombDomain& domain, std::int64_t n, std::uint64_t seed,
                                                           SamplingWeights w = {}) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Point2, Point2>> out;
  out.reserve(static_cast<std::size_t>(n));
  const double total = w.tent + w.outside + w.mixed;
  for (std::int64_t k = 0; k < n; ++k) {
    const double u = detail::uniform(rng, 0.0, total);
    if (u < w.tent) {
      const Point2 a = detail::sample_tent_point(domain, rng);
      out.emplace_back(a, detail::sample_tent_point(domain, rng));
    } else if (u < w.tent + w.outside) {
      const Point2 a = detail::sample_outside_point(rng);
      out.emplace_back(a, detail::sample_outside_point(rng));
    } else {
      const Point2 a = detail::sample_tent_point(domain, rng);
      out.emplace_back(a, detail::sample_outside_point(rng));
    }
  }
  return out;
}

/// Ratio for one pair; integration failures are rethrown with the pair attached.
inline PairRecord evaluate_pair(Point2 x, Point2 y, Exponent p, const CombDomain& domain,
                                const IntegrationOptions& opt) {
  PairRecord rec{x, y};
  try {
    const Connection c = connect(x, y, domain);
    rec.kind = c.kind;
    const IntegralResult r = polyline_integral(c.curve, p, domain, opt);
    rec.integral = r.value;
    rec.integral_error = r.error;
  } catch (const Error& e) {
    throw PairFailure(x, y, e.what());
  }
  const double sep = distance(x, y);
  rec.ratio = sep > 0.0 ? rec.integral / std::pow(sep, p.two_minus()) : 0.0;
  return rec;
}

/// Max ratio over evaluated pairs; ties go to the lowest index.
inline CEstimate reduce_pairs(std::vector<PairRecord> records, std::uint64_t seed) {
  CEstimate est;
  est.seed = seed;
  est.pair_count = static_cast<std::int64_t>(records.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (est.worst_index < 0 || records[k].ratio > est.value) {
      est.value = records[k].ratio;
      est.worst_index = static_cast<std::int64_t>(k);
      est.worst_x = records[k].x;
      est.worst_y = records[k].y;
      est.worst_case = records[k].kind;
    }
  }
  est.pairs = std::move(records);
  return est;
}

inline CEstimate estimate_C(const CombDomain& domain, Exponent p, std::int64_t n_pairs, std::uint64_t seed,
                            const IntegrationOptions& opt = {}, unsigned workers = 0, SamplingWeights w = {}) {
  if (n_pairs < 1) throw PreconditionError("n_pairs must be at least 1");
  require_admissible(domain.lambda(), p.p);
  const auto pairs = sample_pairs(domain, n_pairs, seed, w);
  std::vector<PairRecord> records(pairs.size());
  parallel_for(pairs.size(), workers, [&](std::size_t k) {
    records[k] = evaluate_pair(pairs[k].first, pairs[k].second, p, domain, opt);
  });
  return reduce_pairs(std::move(records), seed);
}

}  // namespace combdim
