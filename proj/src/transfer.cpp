#include "dipole/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dipole/spatial.hpp"

namespace dipole {

namespace {

void append_transferred(const ArcPartition& partition, std::vector<UnitArc>& out) {
  for (const UnitArc& piece : partition.subarcs) {
    out.push_back({piece.start_point(), piece.start + kPi, piece.span});
  }
}

double next_delta(const ConstructionAState& state) {
  if (state.schedule.size() < state.stage + 1) {
    fail(ErrorKind::Precondition, "schedule has no entry for stage " + std::to_string(state.stage + 1));
  }
  return state.schedule.delta(state.stage + 1);
}

}  // namespace

TransferResult transfer_arcs(const UnitArc& arc, double delta) {
  const ArcPartition partition = partition_arc(arc, delta);
  TransferResult result;
  result.points = partition.points;
  append_transferred(partition, result.arcs);
  return result;
}

ConstructionAState build_construction_a(const Schedule& schedule, std::size_t k_max, std::uint64_t point_cap) {
  schedule.validate();
  if (schedule.size() < k_max) fail(ErrorKind::Precondition, "schedule shorter than k_max");
  double predicted = 1.0;
  for (std::size_t k = 1; k <= k_max; ++k) predicted += kTwoPi / schedule.delta(k);
  if (predicted > static_cast<double>(point_cap)) {
    fail(ErrorKind::ResourceCap, "construction A: predicted " + std::to_string(static_cast<std::uint64_t>(predicted)) +
                                     " points exceeds cap " + std::to_string(point_cap));
  }

  ConstructionAState state;
  state.schedule = schedule;
  state.points.push_back({Point2{}});
  state.arcs.push_back({Point2{}, 0.0, kTwoPi});

  for (std::size_t k = 1; k <= k_max; ++k) {
    const double delta = schedule.delta(k);
    std::vector<Point2> level;
    std::vector<UnitArc> next;
    for (const UnitArc& arc : state.arcs) {
      const ArcPartition partition = partition_arc(arc, delta);
      for (Point2 p : partition.points) state.pairs.push_back({arc.centre, p, static_cast<std::uint32_t>(k)});
      level.insert(level.end(), partition.points.begin(), partition.points.end());
      append_transferred(partition, next);
    }
    state.points.push_back(std::move(level));
    state.arcs = std::move(next);
    state.stage = k;
  }
  return state;
}

std::vector<DipolePair> generating_pairs_through(const ConstructionAState& state, std::size_t k) {
  std::vector<DipolePair> out;
  for (const GeneratingPair& g : state.pairs) {
    if (g.stage <= k) out.push_back({g.centre, g.point});
  }
  return out;
}

void stream_next_stage(const ConstructionAState& state,
                       const std::function<void(const UnitArc&, std::span<const Point2>)>& visit) {
  const double delta = next_delta(state);
  std::vector<Point2> buffer;
  for (const UnitArc& arc : state.arcs) {
    buffer.clear();
    append_partition_points(arc, delta, buffer);
    visit(arc, buffer);
  }
}

double containment_check(const ConstructionAState& state, std::size_t k) {
  if (k < 1 || k > state.stage) {
    fail(ErrorKind::Precondition, "containment_check: need 1 <= k <= stage (" + std::to_string(state.stage) + ")");
  }
  const double delta_k = state.schedule.delta(k);
  const PointIndex anchors(state.points[k - 1], 2.0 * delta_k);
  double worst = 0.0;
  if (k + 1 <= state.stage) {
    for (Point2 p : state.points[k + 1]) worst = std::max(worst, anchors.nearest_distance(p));
    return worst;
  }
  // Streamed stage: every point of an arc's partition lies within the arc's
  // length of its start s, so any anchor nearer than s's own nearest anchor is
  // inside a small ball around s.
  std::vector<std::size_t> candidates;
  stream_next_stage(state, [&](const UnitArc& arc, std::span<const Point2> pts) {
    const Point2 s = arc.start_point();
    double reach = 0.0;
    for (Point2 p : pts) reach = std::max(reach, distance(p, s));
    const double radius = 2.0 * reach + 2.0 * anchors.nearest_distance(s) + kTol.geometric;
    candidates.clear();
    anchors.within(s, radius, candidates);
    for (Point2 p : pts) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c : candidates) best = std::min(best, distance(p, anchors.points()[c]));
      worst = std::max(worst, best);
    }
  });
  return worst;
}

CoveringRecursion covering_recursion_check(const ConstructionAState& state, std::size_t k, double r_override) {
  if (k < 1 || k > state.stage) {
    fail(ErrorKind::Precondition, "covering_recursion_check: need 1 <= k <= stage");
  }
  CoveringRecursion out;
  out.k = k;
  out.r = r_override > 0.0 ? r_override : std::pow(state.schedule.delta(k), 1.5);
  if (out.r < kLimits.min_scale) fail(ErrorKind::InvalidArgument, "covering_recursion_check: r below 2^-40");
  CellSet cells(Grid(out.r, {}));
  const std::size_t stored_top = std::min(k + 1, state.stage);
  for (std::size_t i = 0; i <= stored_top; ++i) cells.add(state.points[i]);
  if (k + 1 > state.stage) {
    stream_next_stage(state, [&](const UnitArc&, std::span<const Point2> pts) { cells.add(pts); });
  }
  out.covering = cells.count();
  const double prev = k >= 2 ? 1.0 / state.schedule.delta(k - 1) : 1.0;
  out.reference = prev / state.schedule.delta(k);
  out.slope = std::log(static_cast<double>(out.covering)) / std::log(1.0 / out.r);
  return out;
}

}  // namespace dipole
