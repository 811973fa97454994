#pragma once

// Grid realization of Omega intersected with a ball.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "combdim/comb_domain.hpp"
#include "combdim/error.hpp"
#include "combdim/geometry.hpp"

namespace combdim {

inline constexpr int kRasterResolutionCap = 8192;

enum class CellState : std::uint8_t { outside_ball, in_domain, not_in_domain };

struct RasterBall {
  Point2 center;
  double radius = 0.0;
  int resolution = 0;
  double band = 0.0;  // classification band actually used
  std::vector<CellState> occupancy;  // row-major, row = y index

  double cell_size() const { return 2.0 * radius / resolution; }

  // Offsets are symmetric about the center so mirrored cells land on exactly
  // mirrored coordinates.
  double offset(int i) const { return (i + 0.5 - 0.5 * resolution) * cell_size(); }
  Point2 cell_center(int ix, int iy) const { return {center.x + offset(ix), center.y + offset(iy)}; }

  CellState at(int ix, int iy) const {
    return occupancy[static_cast<std::size_t>(iy) * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(ix)];
  }

  /// Cell containing p, or false if p falls outside the grid square.
  bool locate(Point2 p, int& ix, int& iy) const {
    const double h = cell_size();
    const double fx = std::floor((p.x - center.x) / h + 0.5 * resolution);
    const double fy = std::floor((p.y - center.y) / h + 0.5 * resolution);
    if (fx < 0 || fy < 0 || fx >= resolution || fy >= resolution) return false;
    ix = static_cast<int>(fx);
    iy = static_cast<int>(fy);
    return true;
  }
};

enum class RasterMode {
  // A cell is in Omega only if its center is interior with the boundary band
  // widened to the cell size. Walls and tent are 1-Lipschitz, so the whole
  // cell then lies in Omega and 4-adjacent in-Omega cells are connected in
  // the continuum. Without this, cell centers never sample the removed axis
  // segment and the two sides of the tent merge at the Cantor pinch points.
  conservative,
  // Plain center membership with the domain's default band.
  center,
};

/// Classifies every cell whose center lies in the closed ball. Cells in the
/// boundary band count as not in Omega.
inline RasterBall raster(const CombDomain& domain, Point2 center, double radius, int resolution,
                         RasterMode mode = RasterMode::conservative, int resolution_cap = kRasterResolutionCap) {
  if (!(radius > 0.0)) throw PreconditionError("raster radius must be positive");
  if (resolution < 16) throw PreconditionError("raster resolution must be at least 16");
  if (resolution > resolution_cap) {
    throw CapacityError("raster resolution " + std::to_string(resolution) + " exceeds the cap " +
                        std::to_string(resolution_cap));
  }
  RasterBall rb;
  rb.center = center;
  rb.radius = radius;
  rb.resolution = resolution;
  rb.occupancy.assign(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution),
                      CellState::outside_ball);
  const double r2 = radius * radius;
  rb.band = mode == RasterMode::conservative ? std::max(domain.band(), rb.cell_size()) : domain.band();
  for (int iy = 0; iy < resolution; ++iy) {
    const double oy = rb.offset(iy);
    for (int ix = 0; ix < resolution; ++ix) {
      const double ox = rb.offset(ix);
      if (ox * ox + oy * oy > r2) continue;
      const Region reg = domain.contains({center.x + ox, center.y + oy}, rb.band);
      rb.occupancy[static_cast<std::size_t>(iy) * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(ix)] =
          reg == Region::interior ? CellState::in_domain : CellState::not_in_domain;
    }
  }
  return rb;
}

}  // namespace combdim
