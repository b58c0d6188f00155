#include "dipole/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dipole/config.hpp"

namespace dipole {

namespace {
constexpr double kIndexLimit = 0x1p62;
}

Grid::Grid(double side_, Point2 origin_) : side(side_), origin(origin_) {
  if (!(side > 0.0) || !std::isfinite(side)) fail(ErrorKind::InvalidArgument, "grid side must be positive");
}

CellKey Grid::key(Point2 p) const {
  const double u = std::floor((p.x - origin.x) / side);
  const double v = std::floor((p.y - origin.y) / side);
  if (!(std::abs(u) < kIndexLimit) || !(std::abs(v) < kIndexLimit)) {
    fail(ErrorKind::InvalidArgument, "grid index overflow: coordinates too large for the scale");
  }
  return {static_cast<std::int64_t>(u), static_cast<std::int64_t>(v)};
}

Point2 Grid::cell_centre(CellKey k) const {
  return {origin.x + (static_cast<double>(k.i) + 0.5) * side, origin.y + (static_cast<double>(k.j) + 0.5) * side};
}

PointIndex::PointIndex(std::span<const Point2> points, double cell_side)
    : points_(points.begin(), points.end()), grid_(cell_side, {}) {
  for (std::size_t n = 0; n < points_.size(); ++n) {
    const CellKey k = grid_.key(points_[n]);
    buckets_[k].push_back(n);
    if (n == 0) {
      i_min_ = i_max_ = k.i;
      j_min_ = j_max_ = k.j;
    } else {
      i_min_ = std::min(i_min_, k.i);
      i_max_ = std::max(i_max_, k.i);
      j_min_ = std::min(j_min_, k.j);
      j_max_ = std::max(j_max_, k.j);
    }
  }
}

double PointIndex::nearest_distance(Point2 p) const {
  if (points_.empty()) return std::numeric_limits<double>::infinity();
  const CellKey c = grid_.key(p);
  double best = std::numeric_limits<double>::infinity();
  // Ring r holds cells at Chebyshev distance r; everything outside ring r is
  // at least r * side away from p.
  const std::int64_t max_ring = std::max({std::abs(c.i - i_min_), std::abs(c.i - i_max_), std::abs(c.j - j_min_),
                                          std::abs(c.j - j_max_)}) + 1;
  for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
    if (best <= static_cast<double>(ring - 1) * grid_.side) break;
    const auto visit = [&](std::int64_t di, std::int64_t dj) {
      const auto it = buckets_.find({c.i + di, c.j + dj});
      if (it == buckets_.end()) return;
      for (std::size_t n : it->second) best = std::min(best, distance(p, points_[n]));
    };
    if (ring == 0) {
      visit(0, 0);
      continue;
    }
    for (std::int64_t d = -ring; d <= ring; ++d) {
      visit(d, -ring);
      visit(d, ring);
    }
    for (std::int64_t d = -ring + 1; d < ring; ++d) {
      visit(-ring, d);
      visit(ring, d);
    }
  }
  return best;
}

void PointIndex::within(Point2 p, double radius, std::vector<std::size_t>& out) const {
  if (points_.empty() || radius < 0.0) return;
  const CellKey lo = grid_.key({p.x - radius, p.y - radius});
  const CellKey hi = grid_.key({p.x + radius, p.y + radius});
  for (std::int64_t i = std::max(lo.i, i_min_); i <= std::min(hi.i, i_max_); ++i) {
    for (std::int64_t j = std::max(lo.j, j_min_); j <= std::min(hi.j, j_max_); ++j) {
      const auto it = buckets_.find({i, j});
      if (it == buckets_.end()) continue;
      for (std::size_t n : it->second) {
        if (distance(p, points_[n]) <= radius) out.push_back(n);
      }
    }
  }
}

}  // namespace dipole
