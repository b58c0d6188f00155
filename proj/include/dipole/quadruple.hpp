#pragma once

// Construction B: four-way splitting with ±θ/8 rotations.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dipole/config.hpp"
#include "dipole/dimension.hpp"
#include "dipole/geometry.hpp"

namespace dipole {

inline constexpr std::int64_t kRootParent = -1;

struct QuadSplit {
  /// Quarter points x_1, x_2.
  std::array<Point2, 2> points;
  /// E'_1, E''_1, E'_2, E''_2: the sub-arc around x_i rotated by +θ/8, -θ/8.
  std::array<UnitArc, 4> arcs;
};

QuadSplit split_arc_quadruple(const UnitArc& arc);

/// E_0 (a π/2-arc about the origin) and the two π/4-arcs centred at its quarter
/// points with the origin as their midpoint. Throws if the three arcs fail the
/// direction checks.
std::array<UnitArc, 3> initial_opposite_config();

struct QuadArc {
  UnitArc arc;
  /// Stored point the arc was rotated about, or kRootParent.
  std::int64_t pivot = kRootParent;
  /// +1 for the +θ/8 copy, -1 for the -θ/8 copy, 0 for roots.
  std::int8_t turn = 0;
};

struct QuadPoint {
  Point2 position;
  std::uint32_t stage = 0;
  std::int64_t parent = kRootParent;
  /// Centre of the arc the point was cut from; (host_centre, position) is a unit pair.
  Point2 host_centre;
  /// Turn of the host arc and which quarter point (0 or 1) this is.
  std::int8_t turn = 0;
  std::uint8_t quarter = 0;
};

struct ConstructionBState {
  std::size_t stage = 0;
  std::array<UnitArc, 3> initial{};
  /// Arcs after `stage` splitting rounds: 3·4^stage of them.
  std::vector<QuadArc> arcs;
  /// Points from rounds 0..stage-1; a point's stage is the round that produced it.
  std::vector<QuadPoint> points;
};

ConstructionBState build_construction_b(std::size_t n_max, std::uint64_t point_cap = kLimits.point_cap);

/// Ratios d/4^{-2n} for the two matched-quarter pairs and d/4^{-n} for the four
/// cross pairs among the grandchildren of each point born in round n.
struct SiblingStats {
  std::vector<double> intra;
  std::vector<double> cross;
};

SiblingStats sibling_distance_stats(const ConstructionBState& state, std::size_t n);

/// Grid count at r = 4^{-k} of the points produced by the first k rounds.
std::uint64_t splitting_multiplicity_count(const ConstructionBState& state, std::size_t k);

/// Points with stage < k.
std::vector<Point2> points_through(const ConstructionBState& state, std::size_t k);

/// (host centre, point) pairs, optionally followed by copies rotated a quarter turn about the origin.
std::vector<DipolePair> construction_b_pairs(const ConstructionBState& state, bool with_rotated_copy);

std::vector<Point2> rotated_copy(std::span<const Point2> points, double angle = kPi / 2.0);

}  // namespace dipole
