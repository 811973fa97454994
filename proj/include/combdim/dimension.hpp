#pragma once

// Dimension proxies for finite point sets: box counting with a log-log fit,
// and hierarchies of maximal separated nets with the per-ball counts N_j.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "combdim/cantor.hpp"
#include "combdim/error.hpp"
#include "combdim/geometry.hpp"

namespace combdim {

class PointSet {
 public:
  PointSet() = default;
  PointSet(std::vector<Point2> pts, std::string label = {}) : points_(std::move(pts)), label_(std::move(label)) {
    for (const Point2& p : points_) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw PreconditionError("point set contains a non-finite point");
    }
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
  }

  /// Scalars embedded on the x axis.
  static PointSet on_axis(const std::vector<double>& xs, std::string label = {}) {
    std::vector<Point2> pts;
    pts.reserve(xs.size());
    for (double x : xs) pts.push_back({x, 0.0});
    return PointSet(std::move(pts), std::move(label));
  }

  const std::vector<Point2>& points() const { return points_; }  // lexicographically sorted
  const std::string& label() const { return label_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  PointSet translated(Point2 v) const {
    std::vector<Point2> pts;
    for (const Point2& p : points_) pts.push_back(p + v);
    return PointSet(std::move(pts), label_);
  }

  double min_spacing() const;

 private:
  std::vector<Point2> points_;
  std::string label_;
};

/// Endpoints of the level-j closed intervals of C_lambda as a point set on the axis.
inline PointSet cantor_endpoint_set(double lambda, int level) {
  const CantorParams params(lambda, std::max(level, 1));
  return PointSet::on_axis(level_endpoints(params, level), "cantor-endpoints");
}

namespace detail {

struct CellKey {
  std::int64_t ix;
  std::int64_t iy;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    return std::hash<std::int64_t>()(k.ix * 0x9E3779B97F4A7C15LL ^ k.iy);
  }
};

inline std::int64_t cell_index(double v, double origin, double size) {
  return static_cast<std::int64_t>(std::floor((v - origin) / size + 1e-9));
}

}  // namespace detail

inline double PointSet::min_spacing() const {
  if (points_.size() < 2) return std::numeric_limits<double>::infinity();
  // Points are sorted by x; a sweep with a shrinking window finds the closest pair.
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size() && points_[j].x - points_[i].x < best; ++j) {
      best = std::min(best, distance(points_[i], points_[j]));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Box counting

enum class DimensionMethod { box, net };

struct ScaleCount {
  double scale;
  std::int64_t count;
};

struct DimensionEstimate {
  double value = 0.0;
  DimensionMethod method = DimensionMethod::box;
  double finest = 0.0;
  double coarsest = 0.0;
  double residual = 0.0;            // box: RMS residual of the log-log fit
  std::vector<ScaleCount> counts;   // box
};

/// Number of occupied half-open grid boxes of side delta anchored at the
/// componentwise minimum of E. The tiny index offset pushes points that sit
/// on a box edge up consistently despite rounding.
inline std::int64_t count_boxes(const PointSet& e, double delta) {
  if (e.empty()) return 0;
  double ox = std::numeric_limits<double>::infinity();
  double oy = ox;
  for (const Point2& p : e.points()) {
    ox = std::min(ox, p.x);
    oy = std::min(oy, p.y);
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> keys;
  keys.reserve(e.size());
  for (const Point2& p : e.points()) keys.emplace_back(detail::cell_index(p.x, ox, delta), detail::cell_index(p.y, oy, delta));
  std::sort(keys.begin(), keys.end());
  return std::unique(keys.begin(), keys.end()) - keys.begin();
}

/// Least-squares slope of log N(delta) against log(1/delta).
inline DimensionEstimate box_count(const PointSet& e, std::vector<double> scales) {
  if (e.empty()) throw PreconditionError("box counting needs a non-empty set");
  std::sort(scales.begin(), scales.end());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
  for (double s : scales) {
    if (!(s > 0.0)) throw PreconditionError("box scales must be positive");
  }
  if (scales.size() < 3) throw PreconditionError("box counting needs at least 3 distinct scales");
  if (scales.back() / scales.front() < 4.0) throw PreconditionError("box scales must span a factor of at least 4");

  DimensionEstimate est;
  est.method = DimensionMethod::box;
  est.finest = scales.front();
  est.coarsest = scales.back();
  for (auto it = scales.rbegin(); it != scales.rend(); ++it) est.counts.push_back({*it, count_boxes(e, *it)});
  if (e.size() == 1) return est;  // one box at every scale: slope 0

  std::vector<std::int64_t> distinct;
  for (const auto& c : est.counts) distinct.push_back(c.count);
  std::sort(distinct.begin(), distinct.end());
  if (std::unique(distinct.begin(), distinct.end()) - distinct.begin() < 2) {
    throw RegressionError("box counts take fewer than 2 distinct values");
  }
  const double n = static_cast<double>(est.counts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& c : est.counts) {
    const double x = -std::log(c.scale);
    const double y = std::log(static_cast<double>(c.count));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  double ss = 0.0;
  for (const auto& c : est.counts) {
    const double r = std::log(static_cast<double>(c.count)) - (icpt + slope * -std::log(c.scale));
    ss += r * r;
  }
  est.value = slope;
  est.residual = std::sqrt(ss / n);
  return est;
}

/// ratio^k for k = k0..k1.
inline std::vector<double> geometric_scales(double ratio, int k0, int k1) {
  std::vector<double> out;
  for (int k = k0; k <= k1; ++k) out.push_back(std::pow(ratio, k));
  return out;
}

// ---------------------------------------------------------------------------
// Separated nets

/// Greedy maximal scale-separated subset over the lexicographic order:
/// a point joins unless it lies strictly within `scale` of a chosen point.
inline PointSet separated_net(const PointSet& e, double scale) {
  if (!(scale > 0.0)) throw PreconditionError("net scale must be positive");
  std::unordered_map<detail::CellKey, std::vector<Point2>, detail::CellHash> grid;
  std::vector<Point2> chosen;
  for (const Point2& p : e.points()) {
    const std::int64_t cx = static_cast<std::int64_t>(std::floor(p.x / scale));
    const std::int64_t cy = static_cast<std::int64_t>(std::floor(p.y / scale));
    bool close = false;
    for (std::int64_t dx = -1; dx <= 1 && !close; ++dx) {
      for (std::int64_t dy = -1; dy <= 1 && !close; ++dy) {
        auto it = grid.find({cx + dx, cy + dy});
        if (it == grid.end()) continue;
        for (const Point2& q : it->second) {
          if (distance(p, q) < scale) {
            close = true;
            break;
          }
        }
      }
    }
    if (close) continue;
    chosen.push_back(p);
    grid[{cx, cy}].push_back(p);
  }
  return PointSet(std::move(chosen), e.label());
}

struct NetHierarchy {
  double ratio = 0.5;
  int base_level = 1;
  std::vector<PointSet> levels;  // levels[m] is the net at level base_level + m
  // counts[m][k][t]: N_j for ball k of level i = base_level + m and j = i + 1 + t.
  std::vector<std::vector<std::vector<std::int64_t>>> counts;

  int last_level() const { return base_level + static_cast<int>(levels.size()) - 1; }
  int depth() const { return static_cast<int>(levels.size()) - 1; }
  const PointSet& net(int i) const { return levels[static_cast<std::size_t>(i - base_level)]; }
  std::int64_t count(int i, std::size_t k, int j) const {
    return counts[static_cast<std::size_t>(i - base_level)][k][static_cast<std::size_t>(j - i - 1)];
  }
};

namespace detail {

// Number of points of `net` (sorted by x) strictly closer than `reach` to c.
inline std::int64_t count_within(const std::vector<Point2>& net, Point2 c, double reach) {
  auto lo = std::lower_bound(net.begin(), net.end(), c.x - reach, [](const Point2& p, double v) { return p.x < v; });
  std::int64_t n = 0;
  for (auto it = lo; it != net.end() && it->x <= c.x + reach; ++it) {
    if (distance(*it, c) < reach) ++n;
  }
  return n;
}

}  // namespace detail

/// Nets at levels i0..i0+depth and, for every level-i ball and every j > i,
/// the number of level-j balls meeting it (open balls of radius ratio^level).
inline NetHierarchy build_hierarchy(const PointSet& e, double ratio, int i0, int depth) {
  if (e.empty()) throw PreconditionError("net hierarchy needs a non-empty set");
  if (!(ratio > 0.0 && ratio < 1.0)) throw PreconditionError("net ratio must lie in (0, 1)");
  if (depth < 2) throw PreconditionError("net hierarchy depth must be at least 2");
  NetHierarchy h;
  h.ratio = ratio;
  h.base_level = i0;
  for (int i = i0; i <= i0 + depth; ++i) h.levels.push_back(separated_net(e, std::pow(ratio, i)));
  h.counts.resize(h.levels.size());
  for (std::size_t m = 0; m < h.levels.size(); ++m) {
    const double ri = std::pow(ratio, i0 + static_cast<int>(m));
    const auto& balls = h.levels[m].points();
    auto& table = h.counts[m];
    table.resize(balls.size());
    for (std::size_t k = 0; k < balls.size(); ++k) {
      for (std::size_t mj = m + 1; mj < h.levels.size(); ++mj) {
        const double rj = std::pow(ratio, i0 + static_cast<int>(mj));
        table[k].push_back(detail::count_within(h.levels[mj].points(), balls[k], ri + rj));
      }
    }
  }
  return h;
}

/// Default hierarchy: base level 1, finest level the first at which
/// ratio^i drops below the minimum point spacing (so the finest net is E).
inline NetHierarchy build_default_hierarchy(const PointSet& e, double ratio) {
  const double spacing = e.min_spacing();
  int last = 3;
  if (std::isfinite(spacing)) {
    while (std::pow(ratio, last) >= spacing) ++last;
  }
  return build_hierarchy(e, ratio, 1, std::max(last - 1, 2));
}

struct NetBallDiagnostic {
  int i = 0;
  std::int64_t k = 0;
  int j_witness = -1;  // -1 when no witness exists within the hierarchy
  std::int64_t n_j = 0;
  bool budget_limited = false;  // too close to the finest level to be tested
};

struct NetBoundResult {
  DimensionEstimate estimate;
  int window = 0;
  int tested_levels = 0;
  std::vector<NetBallDiagnostic> balls;
};

/// Raised when no grid value of s admits a witness for every tested ball.
struct NetBoundFailure : Error {
  NetBoundFailure(NetBallDiagnostic ball, const std::string& what) : Error(what), violating(ball) {}
  NetBallDiagnostic violating;
};

inline std::vector<double> default_s_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 200; ++k) g.push_back(0.01 * k);
  return g;
}

/// Smallest s in the grid such that every tested ball (k at level i) has a
/// witness j > i in the hierarchy with N_j < ratio^(-(j - i) s). The search
/// for j is truncated at the finest level; balls within `window` levels of
/// it are not tested and are flagged as budget limited. window < 0 picks
/// ceil(depth / 2).
inline NetBoundResult net_dimension_bound(const NetHierarchy& h, const std::vector<double>& s_grid = default_s_grid(),
                                          int window = -1) {
  if (s_grid.empty()) throw PreconditionError("s grid is empty");
  for (std::size_t t = 0; t < s_grid.size(); ++t) {
    if (s_grid[t] < 0.0 || s_grid[t] > 2.0) throw PreconditionError("s grid values must lie in [0, 2]");
    if (t > 0 && s_grid[t] < s_grid[t - 1]) throw PreconditionError("s grid must be sorted ascending");
  }
  const int depth = h.depth();
  if (window < 0) window = (depth + 1) / 2;
  window = std::clamp(window, 1, depth);
  const int last = h.last_level();
  const int last_tested = last - window;

  NetBoundResult res;
  res.window = window;
  res.tested_levels = last_tested - h.base_level + 1;
  const double log_inv = -std::log(h.ratio);

  auto witness = [&](int i, std::size_t k, double s, std::int64_t& n_out) {
    for (int j = i + 1; j <= last; ++j) {
      const std::int64_t n = h.count(i, k, j);
      if (static_cast<double>(n) < std::exp((j - i) * s * log_inv)) {
        n_out = n;
        return j;
      }
    }
    return -1;
  };

  NetBallDiagnostic worst;
  for (double s : s_grid) {
    bool ok = true;
    for (int i = h.base_level; i <= last_tested && ok; ++i) {
      for (std::size_t k = 0; k < h.net(i).size(); ++k) {
        std::int64_t n = 0;
        if (witness(i, k, s, n) < 0) {
          ok = false;
          worst = {i, static_cast<std::int64_t>(k), -1, h.count(i, k, last), false};
          break;
        }
      }
    }
    if (!ok) continue;
    res.estimate.method = DimensionMethod::net;
    res.estimate.value = s;
    res.estimate.finest = std::pow(h.ratio, last);
    res.estimate.coarsest = std::pow(h.ratio, h.base_level);
    for (int i = h.base_level; i <= last; ++i) {
      for (std::size_t k = 0; k < h.net(i).size(); ++k) {
        NetBallDiagnostic d{i, static_cast<std::int64_t>(k), -1, 0, i > last_tested};
        if (!d.budget_limited) d.j_witness = witness(i, k, s, d.n_j);
        res.balls.push_back(d);
      }
    }
    return res;
  }
  throw NetBoundFailure(worst, "no grid value of s passes; level " + std::to_string(worst.i) + " ball " +
                                   std::to_string(worst.k) + " has no witness");
}

}  // namespace combdim
