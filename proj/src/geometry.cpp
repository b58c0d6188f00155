#include "dipole/geometry.hpp"

#include <algorithm>
#include <utility>

#include "dipole/config.hpp"

namespace dipole {

double normalize_angle(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

double angular_distance(double a, double b) {
  const double d = std::abs(normalize_angle(a) - normalize_angle(b));
  return std::min(d, kTwoPi - d);
}

bool UnitArc::is_full_circle() const { return length() >= kTwoPi - kTol.geometric; }

Point2 rotate_about(Point2 p, Point2 pivot, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Point2 d = p - pivot;
  return {pivot.x + c * d.x - s * d.y, pivot.y + s * d.x + c * d.y};
}

Point2 arc_point_at(const UnitArc& arc, double s) {
  if (!(s >= -kTol.geometric && s <= arc.length() + kTol.geometric)) {
    fail(ErrorKind::InvalidArgument, "arc_point_at: arclength outside [0, |span|]");
  }
  const double sense = arc.span < 0.0 ? -1.0 : 1.0;
  return arc.point_at_angle(arc.start + sense * s);
}

namespace {

struct PartitionPlan {
  double first = 0.0;  // angle of the first cut point in clockwise order
  double last = 0.0;   // angle of the final endpoint (proper arcs only)
  double step = 0.0;   // signed, negative
  std::size_t pieces = 1;
  bool full = false;
  bool trivial = false;
};

PartitionPlan plan_partition(const UnitArc& arc, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    fail(ErrorKind::InvalidArgument, "partition_arc: delta must be positive");
  }
  PartitionPlan plan;
  const double length = arc.length();
  plan.full = arc.is_full_circle();
  // Clockwise traversal: a clockwise arc is walked from its start, a
  // counterclockwise one from its end.
  plan.first = arc.span < 0.0 ? arc.start : arc.end();
  plan.last = arc.span < 0.0 ? arc.end() : arc.start;
  if (length <= delta) {
    plan.trivial = true;
    plan.step = -length;
    return plan;
  }
  const double ratio = length / (2.0 * delta) * (1.0 - kTol.count_slack);
  plan.pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ratio)));
  plan.step = -length / static_cast<double>(plan.pieces);
  return plan;
}

}  // namespace

void append_partition_points(const UnitArc& arc, double delta, std::vector<Point2>& out) {
  const PartitionPlan plan = plan_partition(arc, delta);
  if (plan.trivial) {
    out.push_back(arc.point_at_angle(plan.first));
    if (!plan.full) out.push_back(arc.point_at_angle(plan.last));
    return;
  }
  for (std::size_t i = 0; i < plan.pieces; ++i) {
    out.push_back(arc.point_at_angle(plan.first + static_cast<double>(i) * plan.step));
  }
  if (!plan.full) out.push_back(arc.point_at_angle(plan.last));
}

ArcPartition partition_arc(const UnitArc& arc, double delta) {
  ArcPartition result;
  const PartitionPlan plan = plan_partition(arc, delta);
  append_partition_points(arc, delta, result.points);
  if (plan.trivial) {
    result.subarcs.push_back(arc);
    return result;
  }
  result.subarcs.reserve(plan.pieces);
  for (std::size_t i = 0; i < plan.pieces; ++i) {
    result.subarcs.push_back({arc.centre, plan.first + static_cast<double>(i) * plan.step, plan.step});
  }
  return result;
}

double AngularNet::gap_after(std::size_t i) const {
  const std::size_t n = angles.size();
  if (n == 0) return 0.0;
  const double to_next = n == 1 ? kTwoPi : normalize_angle(angles[(i + 1) % n] - angles[i]);
  if (domain.is_full()) return n == 1 ? kTwoPi : to_next;
  const double to_end = normalize_angle(domain.low + domain.length - angles[i]);
  return std::min(to_next, to_end);
}

AngularNet max_separated_directions(AngularInterval interval, double delta) {
  const double length = std::min(interval.length, kTwoPi);
  if (!(delta > 0.0) || !(delta < length)) {
    fail(ErrorKind::InvalidArgument, "max_separated_directions: need 0 < delta < interval length");
  }
  AngularNet net;
  net.delta = delta;
  net.domain = {normalize_angle(interval.low), length};
  std::size_t count = 0;
  if (net.domain.is_full()) {
    // Wrap-around gap kTwoPi - (count - 1) * delta must stay >= delta.
    count = static_cast<std::size_t>(std::floor(kTwoPi / delta * (1.0 + kTol.count_slack)));
  } else {
    count = static_cast<std::size_t>(std::ceil(length / delta * (1.0 - kTol.count_slack)));
  }
  net.angles.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    net.angles.push_back(normalize_angle(net.domain.low + static_cast<double>(i) * delta));
  }
  std::sort(net.angles.begin(), net.angles.end());
  return net;
}

UnitPairCheck unit_pair_direction(Point2 x, Point2 y, double tol) {
  if (!(tol >= 0.0)) fail(ErrorKind::InvalidArgument, "unit_pair_direction: tol must be >= 0");
  UnitPairCheck check;
  const Point2 v = y - x;
  check.distance = norm(v);
  check.accepted = std::abs(check.distance - 1.0) <= tol;
  if (check.accepted) check.direction = Direction::of(v);
  return check;
}

double arc_direction_gap(std::span<const UnitArc> arcs) {
  // Work on the circle R / πZ.
  std::vector<std::pair<double, double>> pieces;
  for (const UnitArc& arc : arcs) {
    if (arc.length() >= kPi) return 0.0;
    const double low = std::fmod(normalize_angle(std::min(arc.start, arc.end())), kPi);
    const double high = low + arc.length();
    if (high <= kPi) {
      pieces.emplace_back(low, high);
    } else {
      pieces.emplace_back(low, kPi);
      pieces.emplace_back(0.0, high - kPi);
    }
  }
  if (pieces.empty()) return kPi;
  std::sort(pieces.begin(), pieces.end());
  double gap = 0.0;
  double reach = pieces.front().second;
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (pieces[i].first > reach) gap = std::max(gap, pieces[i].first - reach);
    reach = std::max(reach, pieces[i].second);
  }
  gap = std::max(gap, pieces.front().first + (kPi - reach));
  return gap;
}

}  // namespace dipole
