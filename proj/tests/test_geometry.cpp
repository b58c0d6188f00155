#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "dipole/config.hpp"
#include "dipole/geometry.hpp"

using namespace dipole;

namespace {

// Rotation through complex multiplication, independent of rotate_about.
Point2 complex_rotate(Point2 p, Point2 pivot, double angle) {
  const std::complex<double> z = std::complex<double>(p.x - pivot.x, p.y - pivot.y) * std::polar(1.0, angle);
  return {pivot.x + z.real(), pivot.y + z.imag()};
}

void expect_near(Point2 a, Point2 b, double tol = 1e-12) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
}

}  // namespace

TEST(RotateAbout, QuarterTurnAboutUnitPoint) {
  expect_near(rotate_about({0, 0}, {1, 0}, kPi / 2), {1, -1});
  expect_near(rotate_about({0, 0}, {1, 0}, kPi / 2), complex_rotate({0, 0}, {1, 0}, kPi / 2));
}

TEST(RotateAbout, IdentityAndHalfTurn) {
  const Point2 p{0.3, -1.7};
  expect_near(rotate_about(p, {5, 5}, 0.0), p, 1e-15);
  expect_near(rotate_about({2, 0}, {0, 0}, kPi), {-2, 0});
}

TEST(RotateAbout, MatchesComplexOracleAndKeepsPivotDistance) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const Point2 p{u(rng), u(rng)}, pivot{u(rng), u(rng)};
    const double angle = u(rng);
    const Point2 q = rotate_about(p, pivot, angle);
    expect_near(q, complex_rotate(p, pivot, angle), 1e-12);
    EXPECT_NEAR(distance(q, pivot), distance(p, pivot), 1e-12);
  }
}

TEST(ArcPointAt, Examples) {
  const UnitArc quarter{{0, 0}, 0.0, kPi / 2};
  expect_near(arc_point_at(quarter, 0.0), {1, 0});
  expect_near(arc_point_at(quarter, kPi / 2), {0, 1});
  const UnitArc cw{{1, 0}, kPi, -kPi / 2};
  expect_near(arc_point_at(cw, kPi / 4), {1 - std::sqrt(0.5), std::sqrt(0.5)});
}

TEST(ArcPointAt, RejectsOutOfRange) {
  const UnitArc quarter{{0, 0}, 0.0, kPi / 2};
  EXPECT_THROW(arc_point_at(quarter, -0.1), Error);
  EXPECT_THROW(arc_point_at(quarter, 2.0), Error);
}

TEST(ArcPointAt, UnitDistanceProperty) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const UnitArc arc{{10 * u(rng) - 5, 10 * u(rng) - 5}, 20 * u(rng) - 10, (2 * u(rng) - 1) * kTwoPi};
    const Point2 p = arc_point_at(arc, u(rng) * arc.length());
    EXPECT_NEAR(distance(p, arc.centre), 1.0, 1e-12);
  }
}

TEST(PartitionArc, FullCircleAtQuarterDelta) {
  const ArcPartition part = partition_arc({{0, 0}, 0.0, kTwoPi}, kPi / 2);
  ASSERT_EQ(part.subarcs.size(), 2u);
  ASSERT_EQ(part.points.size(), 2u);
  for (const UnitArc& s : part.subarcs) EXPECT_NEAR(s.length(), kPi, 1e-12);
}

TEST(PartitionArc, TrivialWhenShort) {
  const UnitArc arc{{0, 0}, 1.0, 0.2};
  const ArcPartition part = partition_arc(arc, 0.3);
  ASSERT_EQ(part.subarcs.size(), 1u);
  EXPECT_EQ(part.subarcs[0].span, arc.span);
  ASSERT_EQ(part.points.size(), 2u);
}

TEST(PartitionArc, ThreeDeltaGivesTwoPieces) {
  const double delta = 0.1;
  const ArcPartition part = partition_arc({{0, 0}, 0.0, 3 * delta}, delta);
  ASSERT_EQ(part.subarcs.size(), 2u);
  EXPECT_NEAR(part.subarcs[0].length(), 1.5 * delta, 1e-12);
  EXPECT_EQ(part.points.size(), 3u);
}

TEST(PartitionArc, RejectsNonPositiveDelta) {
  EXPECT_THROW(partition_arc({{0, 0}, 0.0, 1.0}, 0.0), Error);
  EXPECT_THROW(partition_arc({{0, 0}, 0.0, 1.0}, -1.0), Error);
}

TEST(PartitionArc, InvariantsOnRandomArcs) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    const double span = (u(rng) < 0.1 ? 1.0 : u(rng)) * kTwoPi * (u(rng) < 0.5 ? -1.0 : 1.0);
    const UnitArc arc{{u(rng), u(rng)}, 10 * u(rng), span};
    const double delta = 0.001 + 0.5 * u(rng);
    const ArcPartition part = partition_arc(arc, delta);
    std::vector<Point2> points;
    append_partition_points(arc, delta, points);
    ASSERT_EQ(points.size(), part.points.size());
    for (std::size_t i = 0; i < points.size(); ++i) EXPECT_EQ(points[i], part.points[i]);
    if (arc.length() <= delta) continue;
    const bool full = arc.is_full_circle();
    ASSERT_EQ(part.points.size(), part.subarcs.size() + (full ? 0 : 1));
    double total = 0.0;
    for (std::size_t i = 0; i < part.subarcs.size(); ++i) {
      const UnitArc& s = part.subarcs[i];
      EXPECT_LT(s.span, 0.0);
      EXPECT_GE(s.length(), delta - 1e-12);
      EXPECT_LE(s.length(), 2 * delta + 1e-12);
      total += s.length();
      // Cut points in clockwise order, consecutive pieces chained end to start.
      expect_near(s.start_point(), part.points[i], 1e-12);
      const Point2 next = part.points[(i + 1) % part.points.size()];
      expect_near(s.end_point(), next, 1e-11);
    }
    EXPECT_NEAR(total, arc.length(), 1e-11);
    // The partition reproduces the arc's endpoints.
    if (!full) {
      const Point2 cw_first = arc.span < 0 ? arc.start_point() : arc.end_point();
      const Point2 cw_last = arc.span < 0 ? arc.end_point() : arc.start_point();
      expect_near(part.points.front(), cw_first, 1e-12);
      expect_near(part.points.back(), cw_last, 1e-12);
    }
  }
}

TEST(AngularNet, QuarterNet) {
  const AngularNet net = max_separated_directions(AngularInterval::full(), kPi / 2);
  ASSERT_EQ(net.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(net.angles[i], i * kPi / 2, 1e-12);
}

TEST(AngularNet, ThousandDirections) {
  const double delta = kTwoPi / 1000;
  const AngularNet net = max_separated_directions(AngularInterval::full(), delta);
  EXPECT_EQ(net.size(), 1000u);
  EXPECT_GE(static_cast<double>(net.size()), 1.0 / (2 * delta));
}

TEST(AngularNet, AssouadArc) {
  const AngularNet net = max_separated_directions({0.0, kPi / 10}, kPi / 100);
  EXPECT_EQ(net.size(), 10u);
}

TEST(AngularNet, RejectsBadDelta) {
  EXPECT_THROW(max_separated_directions(AngularInterval::full(), 0.0), Error);
  EXPECT_THROW(max_separated_directions({0.0, 0.1}, 0.2), Error);
}

TEST(AngularNet, ExhaustiveSeparationAndCovering) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 40; ++t) {
    const bool full = t % 2 == 0;
    const AngularInterval domain = full ? AngularInterval::full() : AngularInterval{kTwoPi * u(rng), 0.5 + 3 * u(rng)};
    const double delta = 0.02 + 0.3 * u(rng);
    if (delta >= domain.length) continue;
    const AngularNet net = max_separated_directions(domain, delta);
    for (std::size_t i = 0; i < net.size(); ++i) {
      for (std::size_t j = i + 1; j < net.size(); ++j) {
        EXPECT_GE(angular_distance(net.angles[i], net.angles[j]), delta - 1e-12);
      }
    }
    if (full) EXPECT_GE(static_cast<double>(net.size()), 1.0 / (2 * delta));
    for (int s = 0; s < 2000; ++s) {
      const double probe = domain.low + domain.length * s / 2000.0;
      double best = kTwoPi;
      for (double a : net.angles) best = std::min(best, angular_distance(a, probe));
      EXPECT_LE(best, delta + 1e-12);
    }
  }
}

TEST(UnitPair, Examples) {
  const UnitPairCheck a = unit_pair_direction({0, 0}, {1, 0}, 0.0);
  ASSERT_TRUE(a);
  EXPECT_EQ(a.direction.theta(), 0.0);
  const UnitPairCheck b = unit_pair_direction({0, 0}, {0.6, 0.8}, 1e-12);
  ASSERT_TRUE(b);
  EXPECT_NEAR(b.direction.theta(), std::atan2(0.8, 0.6), 1e-15);
  const UnitPairCheck c = unit_pair_direction({0, 0}, {1.01, 0}, 1e-3);
  EXPECT_FALSE(c);
  EXPECT_NEAR(c.distance, 1.01, 1e-15);
  EXPECT_THROW(unit_pair_direction({0, 0}, {1, 0}, -1.0), Error);
}

TEST(Direction, NormalizedAndUnit) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const Direction d(u(rng));
    EXPECT_GE(d.theta(), 0.0);
    EXPECT_LT(d.theta(), kTwoPi);
    EXPECT_NEAR(norm(d.unit()), 1.0, 1e-12);
    EXPECT_NEAR(angular_distance(d.antipode().theta(), d.theta()), kPi, 1e-12);
  }
}

TEST(ArcDirectionGap, SimpleCases) {
  const UnitArc third{{0, 0}, 0.0, kPi / 3};
  EXPECT_NEAR(arc_direction_gap(std::span<const UnitArc>(&third, 1)), 2 * kPi / 3, 1e-12);
  const UnitArc half{{0, 0}, 1.0, -kPi};
  EXPECT_EQ(arc_direction_gap(std::span<const UnitArc>(&half, 1)), 0.0);
  // Antipodal arcs cover the same directions modulo π.
  const std::vector<UnitArc> pair{{{0, 0}, 0.0, kPi / 2}, {{3, 3}, kPi, kPi / 2}};
  EXPECT_NEAR(arc_direction_gap(pair), kPi / 2, 1e-12);
}
