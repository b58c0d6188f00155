#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace dipole {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point2, Point2) = default;
};

inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
inline constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline Point2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Maps any finite angle into [0, 2π).
double normalize_angle(double angle);

/// Arclength distance on S¹, in [0, π].
double angular_distance(double a, double b);

/// A point of S¹ stored by its angle in [0, 2π).
class Direction {
 public:
  Direction() = default;
  explicit Direction(double angle) : theta_(normalize_angle(angle)) {}

  static Direction of(Point2 v) { return Direction(std::atan2(v.y, v.x)); }

  double theta() const { return theta_; }
  Point2 unit() const { return unit_vector(theta_); }
  Direction antipode() const { return Direction(theta_ + kPi); }

 private:
  double theta_ = 0.0;
};

/// Arc of a radius-1 circle. `span` is signed: positive runs counterclockwise.
struct UnitArc {
  Point2 centre;
  double start = 0.0;
  double span = 0.0;

  double length() const { return std::abs(span); }
  double end() const { return start + span; }
  bool is_full_circle() const;
  Point2 point_at_angle(double angle) const { return centre + unit_vector(angle); }
  Point2 start_point() const { return point_at_angle(start); }
  Point2 end_point() const { return point_at_angle(end()); }
};

/// Counterclockwise rotation of `p` about `pivot`.
Point2 rotate_about(Point2 p, Point2 pivot, double angle);

/// Point at arclength `s` from the start of `arc`, walking in the sense of its span.
Point2 arc_point_at(const UnitArc& arc, double s);

struct ArcPartition {
  /// Cut points in clockwise order along the arc. A full circle yields a cyclic list.
  std::vector<Point2> points;
  /// Pieces between consecutive cut points, each with clockwise (negative) span
  /// except for the trivial partition, which returns the arc unchanged.
  std::vector<UnitArc> subarcs;
};

/// Splits `arc` into ceil(L / 2δ) equal pieces of length in [δ, 2δ], or returns
/// the trivial partition when L ≤ δ.
ArcPartition partition_arc(const UnitArc& arc, double delta);

/// Appends only the cut points of partition_arc(arc, delta) to `out`.
void append_partition_points(const UnitArc& arc, double delta, std::vector<Point2>& out);

/// Half-open angular interval [low, low + length) on S¹.
struct AngularInterval {
  double low = 0.0;
  double length = kTwoPi;

  static AngularInterval full() { return {0.0, kTwoPi}; }
  bool is_full() const { return length >= kTwoPi; }
};

/// A maximal δ-separated set of directions.
struct AngularNet {
  double delta = 0.0;
  AngularInterval domain;
  std::vector<double> angles;

  std::size_t size() const { return angles.size(); }
  /// Angular measure attributed to net element `i` (distance to the next one).
  double gap_after(std::size_t i) const;
};

AngularNet max_separated_directions(AngularInterval interval, double delta);

struct UnitPairCheck {
  bool accepted = false;
  Direction direction;
  /// Measured |y - x|.
  double distance = 0.0;

  explicit operator bool() const { return accepted; }
};

/// Direction of y - x when |y - x| is 1 within `tol`; rejects otherwise.
UnitPairCheck unit_pair_direction(Point2 x, Point2 y, double tol);

/// Largest angular gap left uncovered, modulo antipodes, by the directions
/// from each arc's centre to its points. Zero when the arcs cover all of S¹/±.
double arc_direction_gap(std::span<const UnitArc> arcs);

}  // namespace dipole
