#pragma once

// Two-sidedness of boundary points: components of Omega within dyadic balls,
// followed from the finest scale outwards through conservative nesting maps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "combdim/comb_domain.hpp"
#include "combdim/error.hpp"
#include "combdim/parallel.hpp"
#include "combdim/raster.hpp"

namespace combdim {

struct ComponentLabeling {
  RasterBall raster;
  std::vector<std::int32_t> labels;  // -1 for cells not in Omega
  std::int32_t count = 0;
  std::vector<std::int32_t> meeting_half;  // labels with a cell center in B(center, r/2)

  std::int32_t label(int ix, int iy) const {
    return labels[static_cast<std::size_t>(iy) * static_cast<std::size_t>(raster.resolution) + static_cast<std::size_t>(ix)];
  }
  /// Labels with a cell center within `cells` cell widths of the ball center.
  std::vector<std::int32_t> labels_near_center(double cells = 3.0) const;
  std::int64_t cell_count(std::int32_t lab) const {
    return std::count(labels.begin(), labels.end(), lab);
  }
};

inline std::vector<std::int32_t> ComponentLabeling::labels_near_center(double cells) const {
  const double h = raster.cell_size();
  const double reach = cells * h;
  std::set<std::int32_t> out;
  const int n = raster.resolution;
  for (int iy = 0; iy < n; ++iy) {
    const double oy = raster.offset(iy);
    if (std::abs(oy) > reach) continue;
    for (int ix = 0; ix < n; ++ix) {
      const double ox = raster.offset(ix);
      if (std::abs(ox) > reach || ox * ox + oy * oy > reach * reach) continue;
      const std::int32_t l = label(ix, iy);
      if (l >= 0) out.insert(l);
    }
  }
  return {out.begin(), out.end()};
}

/// 4-connected flood fill of the in-Omega cells, labels assigned in scanline order.
inline ComponentLabeling components_in_ball(const CombDomain& domain, Point2 center, double r, int resolution) {
  if (!(r > 0.0)) throw PreconditionError("ball radius must be positive");
  if (resolution < 64) throw PreconditionError("component labeling needs resolution at least 64");
  ComponentLabeling cl;
  cl.raster = raster(domain, center, r, resolution);
  const int n = resolution;
  const auto idx = [n](int ix, int iy) { return static_cast<std::size_t>(iy) * static_cast<std::size_t>(n) + static_cast<std::size_t>(ix); };
  cl.labels.assign(cl.raster.occupancy.size(), -1);
  std::deque<std::pair<int, int>> queue;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      if (cl.raster.at(ix, iy) != CellState::in_domain || cl.labels[idx(ix, iy)] >= 0) continue;
      const std::int32_t lab = cl.count++;
      cl.labels[idx(ix, iy)] = lab;
      queue.emplace_back(ix, iy);
      while (!queue.empty()) {
        const auto [cx, cy] = queue.front();
        queue.pop_front();
        const int nbr[4][2] = {{cx + 1, cy}, {cx - 1, cy}, {cx, cy + 1}, {cx, cy - 1}};
        for (const auto& q : nbr) {
          if (q[0] < 0 || q[1] < 0 || q[0] >= n || q[1] >= n) continue;
          const std::size_t k = idx(q[0], q[1]);
          if (cl.labels[k] >= 0 || cl.raster.occupancy[k] != CellState::in_domain) continue;
          cl.labels[k] = lab;
          queue.emplace_back(q[0], q[1]);
        }
      }
    }
  }
  std::set<std::int32_t> half;
  const double r_half2 = 0.25 * r * r;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const std::int32_t l = cl.labels[idx(ix, iy)];
      if (l < 0) continue;
      const double ox = cl.raster.offset(ix);
      const double oy = cl.raster.offset(iy);
      if (ox * ox + oy * oy <= r_half2) half.insert(l);
    }
  }
  cl.meeting_half.assign(half.begin(), half.end());
  return cl;
}

inline std::size_t count_meeting_half(const CombDomain& domain, Point2 center, double r, int resolution) {
  return components_in_ball(domain, center, r, resolution).meeting_half.size();
}

enum class Verdict { two_sided, not_two_sided, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::two_sided: return "two_sided";
    case Verdict::not_two_sided: return "not_two_sided";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

/// One step outward: where each chain's component at the finer scale lands.
struct NestingStep {
  int from_level = 0;  // finer scale 2^-from_level
  int to_level = 0;    // coarser scale
  std::vector<std::int32_t> from_labels;
  std::vector<std::vector<std::int32_t>> hit_labels;  // coarse labels met, per chain
  std::vector<std::int64_t> unmapped_cells;           // fine cells whose center lands outside Omega
};

struct ScaleRecord {
  int level = 0;
  double radius = 0.0;
  std::int32_t component_count = 0;
  std::vector<std::int32_t> near_center;
  std::vector<std::int32_t> chain_labels;  // one label per surviving chain
};

struct TwoSidedCertificate {
  Point2 center;
  int i_min = 0;
  int i_max = 0;
  int resolution = 0;
  Verdict verdict = Verdict::not_two_sided;
  int tail_start = 0;  // coarsest level at which two distinct chains persist
  std::string reason;
  std::vector<ScaleRecord> scales;  // finest first
  std::vector<NestingStep> nesting;
};

/// Decides two-sidedness at dyadic radii 2^-i_min .. 2^-i_max. Chains start
/// from the components touching the center window at the finest scale and
/// are carried outward by mapping every cell to the coarse cell containing
/// its center. A chain meeting two coarse components (or none) makes the
/// verdict inconclusive. The point is two-sided when at least two distinct
/// chains exist at the finest scale; tail_start records how far out they
/// stay distinct (the radius R of the definition).
inline TwoSidedCertificate detect(const CombDomain& domain, Point2 center, int i_min, int i_max, int resolution) {
  const CertifiedDistance bd = domain.boundary_distance(center);
  if (bd.value > domain.band() + bd.error) {
    throw PreconditionError("center (" + std::to_string(center.x) + ", " + std::to_string(center.y) +
                            ") is not within the boundary band");
  }
  if (!(i_min < i_max)) throw PreconditionError("need i_min < i_max");
  if (resolution < 64) throw PreconditionError("detection needs resolution at least 64");

  TwoSidedCertificate cert;
  cert.center = center;
  cert.i_min = i_min;
  cert.i_max = i_max;
  cert.resolution = resolution;

  ComponentLabeling fine = components_in_ball(domain, center, std::ldexp(1.0, -i_max), resolution);
  ScaleRecord rec{i_max, fine.raster.radius, fine.count, fine.labels_near_center(), {}};
  std::vector<std::int32_t> chains = rec.near_center;
  rec.chain_labels = chains;
  cert.scales.push_back(rec);
  cert.tail_start = i_max;
  if (chains.size() < 2) {
    cert.verdict = Verdict::not_two_sided;
    cert.reason = "fewer than two components reach the center at the finest scale";
    return cert;
  }

  for (int level = i_max - 1; level >= i_min; --level) {
    ComponentLabeling coarse = components_in_ball(domain, center, std::ldexp(1.0, -level), resolution);
    NestingStep step{level + 1, level, chains, {}, {}};
    std::vector<std::int32_t> next;
    bool straddle = false;
    for (std::int32_t lab : chains) {
      std::set<std::int32_t> hit;
      std::int64_t unmapped = 0;
      const int n = fine.raster.resolution;
      for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
          if (fine.label(ix, iy) != lab) continue;
          int cx = 0;
          int cy = 0;
          if (!coarse.raster.locate(fine.raster.cell_center(ix, iy), cx, cy) || coarse.label(cx, cy) < 0) {
            ++unmapped;
            continue;
          }
          hit.insert(coarse.label(cx, cy));
        }
      }
      step.hit_labels.emplace_back(hit.begin(), hit.end());
      step.unmapped_cells.push_back(unmapped);
      if (hit.size() != 1) {
        straddle = true;
      } else {
        next.push_back(*hit.begin());
      }
    }
    cert.nesting.push_back(step);
    if (straddle) {
      cert.verdict = Verdict::inconclusive;
      cert.reason = "a component maps onto " + std::string("zero or several coarse components at level ") +
                    std::to_string(level);
      return cert;
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    ScaleRecord r{level, coarse.raster.radius, coarse.count, coarse.labels_near_center(), next};
    cert.scales.push_back(r);
    if (next.size() < 2) break;
    // Both chains must still touch the center window to count toward the tail.
    const auto& nc = cert.scales.back().near_center;
    std::size_t near = 0;
    for (std::int32_t l : next) near += std::binary_search(nc.begin(), nc.end(), l) ? 1 : 0;
    if (near < 2) break;
    cert.tail_start = level;
    chains = std::move(next);
    fine = std::move(coarse);
  }
  cert.verdict = Verdict::two_sided;
  cert.reason = "two distinct nested chains on levels " + std::to_string(cert.tail_start) + ".." +
                std::to_string(i_max);
  return cert;
}

/// detect over many centers; results are in input order.
inline std::vector<TwoSidedCertificate> detect_all(const CombDomain& domain, const std::vector<Point2>& centers, int i_min,
                                                   int i_max, int resolution, unsigned workers = 0) {
  std::vector<TwoSidedCertificate> out(centers.size());
  parallel_for(centers.size(), workers, [&](std::size_t k) { out[k] = detect(domain, centers[k], i_min, i_max, resolution); });
  return out;
}

/// The acceptance corpus: every Cantor endpoint of level <= `level` on the
/// axis plus four control points.
inline std::vector<Point2> two_sided_corpus(double lambda, int level) {
  std::vector<Point2> out;
  for (double x : level_endpoints(CantorParams(lambda, std::max(level, 1)), level)) out.push_back({x, 0.0});
  for (Point2 c : {Point2{0, 0}, Point2{-1, 0}, Point2{0, 1}, Point2{-0.5, -1}}) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

/// Expected verdict from the domain geometry: Cantor points except the origin.
inline bool expected_two_sided(Point2 c) { return c.y == 0.0 && c.x > 0.0 && c.x <= 1.0; }

}  // namespace combdim
