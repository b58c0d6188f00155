#pragma once

// Construction A: iterated arc transfer.
//
// Each arc E (centre e) is cut into pieces of length in [δ, 2δ]. Every piece
// e_i e_{i+1} is moved onto a unit circle centred at the cut point e_i so that
// it starts at e. The move is the half-turn about the midpoint of e and e_i,
// so a pair (e_i, p) on the moved arc spans exactly the antipode of the pair
// (e, q) it came from, and the set of unit directions is unchanged.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dipole/config.hpp"
#include "dipole/dimension.hpp"
#include "dipole/geometry.hpp"
#include "dipole/schedule.hpp"

namespace dipole {

struct TransferResult {
  std::vector<Point2> points;
  std::vector<UnitArc> arcs;
};

TransferResult transfer_arcs(const UnitArc& arc, double delta);

/// A unit-distance pair (centre of a split arc, one of its cut points).
struct GeneratingPair {
  Point2 centre;
  Point2 point;
  std::uint32_t stage = 0;
};

struct ConstructionAState {
  Schedule schedule;
  std::size_t stage = 0;
  /// points[k] is P_k; points[0] = {origin}.
  std::vector<std::vector<Point2>> points;
  /// A_stage.
  std::vector<UnitArc> arcs;
  /// Pairs from every stage, in stage order.
  std::vector<GeneratingPair> pairs;
};

ConstructionAState build_construction_a(const Schedule& schedule, std::size_t k_max,
                                        std::uint64_t point_cap = kLimits.point_cap);

/// Pairs with stage ≤ k as DipolePair values (x = centre, y = point).
std::vector<DipolePair> generating_pairs_through(const ConstructionAState& state, std::size_t k);

/// Calls `visit(host_arc, points)` for each arc of A_stage with the cut points
/// that arc contributes to P_{stage+1}. Nothing is materialized beyond one arc.
void stream_next_stage(const ConstructionAState& state,
                       const std::function<void(const UnitArc&, std::span<const Point2>)>& visit);

/// max over p in P_{k+1} of dist(p, P_{k-1}). k may equal the built stage, in
/// which case P_{k+1} is streamed.
double containment_check(const ConstructionAState& state, std::size_t k);

struct CoveringRecursion {
  std::size_t k = 0;
  double r = 0.0;
  /// N_r of P_0 ∪ ... ∪ P_{k+1}.
  std::uint64_t covering = 0;
  /// δ_{k-1}^{-1} δ_k^{-1}, with δ_0^{-1} taken as #P_0 = 1.
  double reference = 0.0;
  /// log N_r / log(1/r).
  double slope = 0.0;
};

/// Uses r = δ_k^{3/2} unless `r_override` is positive.
CoveringRecursion covering_recursion_check(const ConstructionAState& state, std::size_t k, double r_override = 0.0);

}  // namespace dipole
