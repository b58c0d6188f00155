#include "dipole/quadruple.hpp"

#include <cmath>
#include <string>

namespace dipole {

namespace {

UnitArc rotate_arc(const UnitArc& arc, Point2 pivot, double angle) {
  return {rotate_about(arc.centre, pivot, angle), arc.start + angle, arc.span};
}

}  // namespace

QuadSplit split_arc_quadruple(const UnitArc& arc) {
  const double theta = arc.length();
  if (!(theta > 0.0)) fail(ErrorKind::InvalidArgument, "split_arc_quadruple: zero span");
  const double sense = arc.span < 0.0 ? -1.0 : 1.0;
  const double turn = theta / 8.0;
  QuadSplit out;
  for (int i = 0; i < 2; ++i) {
    const double quarter = arc.start + sense * theta * (i == 0 ? 0.25 : 0.75);
    const Point2 x = arc.point_at_angle(quarter);
    const UnitArc piece{arc.centre, quarter - sense * turn, arc.span / 4.0};
    out.points[i] = x;
    out.arcs[2 * i] = rotate_arc(piece, x, +turn);
    out.arcs[2 * i + 1] = rotate_arc(piece, x, -turn);
  }
  return out;
}

std::array<UnitArc, 3> initial_opposite_config() {
  const UnitArc base{{0.0, 0.0}, kPi / 4.0, kPi / 2.0};
  std::array<UnitArc, 3> config{base, {}, {}};
  for (int i = 0; i < 2; ++i) {
    const double phi = base.start + base.span * (i == 0 ? 0.25 : 0.75);
    const Point2 x = base.point_at_angle(phi);
    // The origin sits at angle phi + π seen from x; centre the π/4-arc on it.
    config[1 + i] = {x, phi + kPi - kPi / 8.0, kPi / 4.0};
  }

  for (int i = 1; i <= 2; ++i) {
    const Point2 mid = config[i].point_at_angle(config[i].start + config[i].span / 2.0);
    if (norm(mid) > kTol.geometric) fail(ErrorKind::CoverageInsufficient, "initial config: origin is not a midpoint");
  }
  // E_1 and E_2 must span exactly the directions of E_0, and the quarter-turn
  // copy must supply the rest of S¹ modulo antipodes.
  const std::array<UnitArc, 2> opposite{config[1], config[2]};
  const double base_gap = arc_direction_gap(std::span<const UnitArc>(&config[0], 1));
  const double opposite_gap = arc_direction_gap(opposite);
  std::vector<UnitArc> doubled(config.begin(), config.end());
  for (const UnitArc& a : config) doubled.push_back(rotate_arc(a, {}, kPi / 2.0));
  const double full_gap = arc_direction_gap(doubled);
  if (std::abs(base_gap - kPi / 2.0) > 1e-9 || std::abs(opposite_gap - kPi / 2.0) > 1e-9 ||
      arc_direction_gap(std::vector<UnitArc>(config.begin(), config.end())) > kPi / 2.0 + 1e-9 || full_gap > 1e-9) {
    fail(ErrorKind::CoverageInsufficient, "initial config: direction coverage check failed");
  }
  return config;
}

ConstructionBState build_construction_b(std::size_t n_max, std::uint64_t point_cap) {
  if (n_max > 20) fail(ErrorKind::ResourceCap, "construction B: n_max too large");
  const double final_arcs = 3.0 * std::pow(4.0, static_cast<double>(n_max));
  if (final_arcs > static_cast<double>(point_cap)) {
    fail(ErrorKind::ResourceCap, "construction B: 3*4^n = " + std::to_string(final_arcs) + " exceeds cap");
  }
  ConstructionBState state;
  state.initial = initial_opposite_config();
  for (const UnitArc& a : state.initial) state.arcs.push_back({a, kRootParent, 0});

  for (std::size_t round = 0; round < n_max; ++round) {
    std::vector<QuadArc> next;
    next.reserve(state.arcs.size() * 4);
    for (const QuadArc& host : state.arcs) {
      const QuadSplit split = split_arc_quadruple(host.arc);
      for (int i = 0; i < 2; ++i) {
        const auto index = static_cast<std::int64_t>(state.points.size());
        state.points.push_back({split.points[i], static_cast<std::uint32_t>(round), host.pivot, host.arc.centre,
                                host.turn, static_cast<std::uint8_t>(i)});
        next.push_back({split.arcs[2 * i], index, +1});
        next.push_back({split.arcs[2 * i + 1], index, -1});
      }
    }
    state.arcs = std::move(next);
    state.stage = round + 1;
  }
  return state;
}

SiblingStats sibling_distance_stats(const ConstructionBState& state, std::size_t n) {
  if (n + 2 > state.stage) {
    fail(ErrorKind::Precondition, "sibling_distance_stats: round " + std::to_string(n + 1) + " has not been built");
  }
  // grandchildren[p][turn][quarter] for points p born in round n.
  struct Slots {
    std::array<std::array<std::int64_t, 2>, 2> at{{{-1, -1}, {-1, -1}}};
  };
  std::vector<Slots> slots(state.points.size());
  for (std::size_t idx = 0; idx < state.points.size(); ++idx) {
    const QuadPoint& q = state.points[idx];
    if (q.stage != n + 1 || q.parent == kRootParent) continue;
    slots[static_cast<std::size_t>(q.parent)].at[q.turn > 0 ? 0 : 1][q.quarter] = static_cast<std::int64_t>(idx);
  }
  const double fine = std::pow(4.0, -2.0 * static_cast<double>(n));
  const double coarse = std::pow(4.0, -static_cast<double>(n));
  SiblingStats stats;
  for (std::size_t idx = 0; idx < state.points.size(); ++idx) {
    if (state.points[idx].stage != n) continue;
    const auto& s = slots[idx].at;
    for (const auto& row : s) {
      for (std::int64_t v : row) {
        if (v < 0) fail(ErrorKind::Precondition, "sibling_distance_stats: lineage missing");
      }
    }
    auto at = [&](int turn, int quarter) { return state.points[static_cast<std::size_t>(s[turn][quarter])].position; };
    for (int q = 0; q < 2; ++q) stats.intra.push_back(distance(at(0, q), at(1, q)) / fine);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) stats.cross.push_back(distance(at(a, 0), at(b, 1)) / coarse);
    }
  }
  return stats;
}

std::vector<Point2> points_through(const ConstructionBState& state, std::size_t k) {
  std::vector<Point2> out;
  for (const QuadPoint& q : state.points) {
    if (q.stage < k) out.push_back(q.position);
  }
  return out;
}

std::uint64_t splitting_multiplicity_count(const ConstructionBState& state, std::size_t k) {
  if (k > state.stage) fail(ErrorKind::Precondition, "splitting_multiplicity_count: stage < k");
  return covering_count(points_through(state, k), {}, std::pow(4.0, -static_cast<double>(k)));
}

std::vector<Point2> rotated_copy(std::span<const Point2> points, double angle) {
  std::vector<Point2> out;
  out.reserve(points.size());
  for (Point2 p : points) out.push_back(rotate_about(p, {}, angle));
  return out;
}

std::vector<DipolePair> construction_b_pairs(const ConstructionBState& state, bool with_rotated_copy) {
  std::vector<DipolePair> out;
  out.reserve(state.points.size() * (with_rotated_copy ? 2 : 1));
  for (const QuadPoint& q : state.points) out.push_back({q.host_centre, q.position});
  if (with_rotated_copy) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({rotate_about(out[i].x, {}, kPi / 2.0), rotate_about(out[i].y, {}, kPi / 2.0)});
    }
  }
  return out;
}

}  // namespace dipole
