#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "dipole/geometry.hpp"

namespace dipole {

/// Integer coordinates of an axis-parallel grid cell.
struct CellKey {
  std::int64_t i = 0;
  std::int64_t j = 0;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t x = static_cast<std::uint64_t>(k.i) * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(k.j);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return static_cast<std::size_t>(x);
  }
};

/// Square grid of side `side` anchored at `origin`.
struct Grid {
  double side = 1.0;
  Point2 origin;

  Grid() = default;
  Grid(double side, Point2 origin);

  /// Cell containing `p`; throws when the index would overflow 62 bits.
  CellKey key(Point2 p) const;
  Point2 cell_centre(CellKey k) const;
};

/// Point index bucketed on a grid, for exact nearest-neighbour and ball queries.
class PointIndex {
 public:
  PointIndex(std::span<const Point2> points, double cell_side);

  /// Exact distance from `p` to the nearest indexed point (infinity if empty).
  double nearest_distance(Point2 p) const;
  /// Indices of points q with |q - p| ≤ radius, appended to `out`.
  void within(Point2 p, double radius, std::vector<std::size_t>& out) const;

  std::size_t size() const { return points_.size(); }
  const std::vector<Point2>& points() const { return points_; }

 private:
  std::vector<Point2> points_;
  Grid grid_;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellKeyHash> buckets_;
  std::int64_t i_min_ = 0, i_max_ = -1, j_min_ = 0, j_max_ = -1;
};

}  // namespace dipole
