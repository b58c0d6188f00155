#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "dipole/config.hpp"
#include "dipole/dimension.hpp"
#include "dipole/schedule.hpp"

using namespace dipole;

namespace {

std::size_t set_oracle_count(const std::vector<Point2>& pts, double r, Point2 origin) {
  std::set<std::pair<long long, long long>> cells;
  for (Point2 p : pts) {
    cells.emplace(static_cast<long long>(std::floor((p.x - origin.x) / r)),
                  static_cast<long long>(std::floor((p.y - origin.y) / r)));
  }
  return cells.size();
}

std::vector<Point2> segment_points(std::size_t n) {
  std::vector<Point2> pts;
  for (std::size_t i = 0; i <= n; ++i) pts.push_back({static_cast<double>(i) / n, 0.0});
  return pts;
}

CoverReport synthetic_report(double e, int first, int last) {
  CoverReport rep;
  for (int j = first; j <= last; ++j) {
    const double r = std::exp2(-j);
    rep.entries.push_back({r, static_cast<std::uint64_t>(std::llround(3.0 * std::pow(r, -e)))});
  }
  return rep;
}

}  // namespace

TEST(CoveringCount, SinglePoint) {
  const Point2 p{0.3, 0.7};
  for (double r : {1.0, 0.1, 1e-6}) EXPECT_EQ(covering_count(std::span<const Point2>(&p, 1), {}, r), 1u);
}

TEST(CoveringCount, UnitSegment) {
  const auto pts = segment_points(1000);
  EXPECT_EQ(covering_count(pts, {}, 0.125), 9u);
}

TEST(CoveringCount, CircleArcCount) {
  const UnitArc circle{{0, 0}, 0.0, kTwoPi};
  for (double r : {0.1, 0.01, 0.001}) {
    const double n = static_cast<double>(covering_count({}, std::span<const UnitArc>(&circle, 1), r));
    EXPECT_GE(n, kTwoPi / r / 2);
    EXPECT_LE(n, kTwoPi / r * 2);
  }
}

TEST(CoveringCount, RejectsNonPositiveScale) {
  const Point2 p{};
  EXPECT_THROW(covering_count(std::span<const Point2>(&p, 1), {}, 0.0), Error);
}

TEST(CoveringCount, MatchesSetOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<Point2> pts;
  for (int i = 0; i < 20000; ++i) pts.push_back({u(rng), u(rng) * 0.01});
  for (double r : {0.5, 0.05, 0.003}) {
    const Point2 origin{0.1234, -0.77};
    EXPECT_EQ(covering_count(pts, {}, r, origin), set_oracle_count(pts, r, origin));
  }
}

TEST(CoveringCount, DyadicMonotoneAndOriginShift) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point2> pts;
  for (int i = 0; i < 5000; ++i) {
    const double t = u(rng);
    pts.push_back({t, t * t});
  }
  std::size_t prev = 0;
  for (int j = 1; j <= 12; ++j) {
    const std::size_t n = covering_count(pts, {}, std::exp2(-j));
    EXPECT_GE(n, prev);
    prev = n;
  }
  const double r = 1.0 / 64;
  const double base = static_cast<double>(covering_count(pts, {}, r));
  for (int s = 0; s < 10; ++s) {
    const double n = static_cast<double>(covering_count(pts, {}, r, {u(rng) * r, u(rng) * r}));
    EXPECT_LE(n, 4 * base);
    EXPECT_LE(base, 4 * n);
  }
}

TEST(CoveringCount, FineScaleCountsPoints) {
  const std::vector<Point2> pts{{0, 0}, {0.5, 0.5}, {0.25, 0.9}, {-1, 2}};
  EXPECT_EQ(covering_count(pts, {}, 1e-3), pts.size());
}

TEST(BoxFit, RecoversPowerLaws) {
  for (double e : {0.5, 1.0, 1.5}) {
    CoverReport rep = synthetic_report(e, 2, 20);
    EXPECT_NEAR(box_dimension_fit(rep, FitMode::Upper), e, 5e-3);
    rep.designated = {0, 4, 8, 12, 16};
    EXPECT_NEAR(box_dimension_fit(rep, FitMode::Lower), e, 5e-3);
  }
}

TEST(BoxFit, ExactOnPowersOfTwo) {
  CoverReport rep;
  for (int j = 2; j <= 12; ++j) rep.entries.push_back({std::exp2(-j), std::uint64_t{3} << j});
  EXPECT_NEAR(box_dimension_fit(rep, FitMode::Upper), 1.0, 1e-9);
}

TEST(BoxFit, RejectsDegenerateReports) {
  CoverReport constant;
  for (int j = 1; j <= 5; ++j) constant.entries.push_back({std::exp2(-j), 7});
  EXPECT_THROW(box_dimension_fit(constant, FitMode::Upper), Error);
  CoverReport short_report = synthetic_report(1.0, 1, 2);
  EXPECT_THROW(box_dimension_fit(short_report, FitMode::Upper), Error);
  CoverReport no_designated = synthetic_report(1.0, 1, 8);
  EXPECT_THROW(box_dimension_fit(no_designated, FitMode::Lower), Error);
  CoverReport rising = synthetic_report(1.0, 1, 8);
  std::swap(rising.entries[0], rising.entries[1]);
  EXPECT_THROW(rising.validate(), Error);
}

TEST(CoverReport, SegmentHasDimensionOne) {
  const auto pts = segment_points(1 << 14);
  const auto scales = geometric_scales(2.0, 4, 12);
  const CoverReport rep = cover_report(pts, {}, scales);
  EXPECT_NEAR(box_dimension_fit(rep, FitMode::Upper), 1.0, 0.03);
}

TEST(Assouad, LatticeLooksTwoDimensional) {
  std::vector<Point2> pts;
  for (int i = 0; i < 256; ++i) {
    for (int j = 0; j < 256; ++j) pts.push_back({(i + 0.5) / 256.0, (j + 0.5) / 256.0});
  }
  const auto pairs = dyadic_scale_pairs(2, 2, 4, 6);
  const auto centres = sample_centres(pts, 10, 3);
  const AssouadProfile prof = assouad_profile(pts, pairs, centres);
  EXPECT_EQ(prof.samples.size(), pairs.size() * centres.size());
  EXPECT_GE(prof.exponent_estimate, 1.8);
  EXPECT_LE(prof.exponent_estimate, 2.6);
}

TEST(Assouad, SinglePointIsZero) {
  const Point2 p{0.2, 0.2};
  const auto pairs = dyadic_scale_pairs(1, 3, 1, 3);
  const AssouadProfile prof = assouad_profile(std::span<const Point2>(&p, 1), pairs, std::span<const Point2>(&p, 1));
  EXPECT_EQ(prof.exponent_estimate, 0.0);
  const Point2 far{50, 50};
  const AssouadProfile empty = assouad_profile(std::span<const Point2>(&p, 1), pairs, std::span<const Point2>(&far, 1));
  EXPECT_EQ(empty.skipped_empty, pairs.size());
}

TEST(SampleCentres, DeterministicAndDistinct) {
  std::vector<Point2> pts;
  for (int i = 0; i < 100; ++i) pts.push_back({static_cast<double>(i), 0.0});
  const auto a = sample_centres(pts, 20, 9);
  const auto b = sample_centres(pts, 20, 9);
  ASSERT_EQ(a.size(), 20u);
  std::set<double> xs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    xs.insert(a[i].x);
  }
  EXPECT_EQ(xs.size(), 20u);
  EXPECT_EQ(sample_centres(pts, 500, 9).size(), 100u);
}

TEST(Hausdorff, MatchesDirectSum) {
  const Schedule s = Schedule::quadratic(1.0, 0.0, 2.0, 6);
  const double d1 = 0x1p-3, d2 = 0x1p-6, d3 = 0x1p-11, d4 = 0x1p-18;
  const double direct = (1 / d1 + 1 / d2) * std::sqrt(d3) + std::sqrt(d4) / d3;
  EXPECT_NEAR(hausdorff_content_upper_bound(s, 0.5, 3), direct, 1e-12 * direct);
  EXPECT_NEAR(hausdorff_content_upper_bound_log2(s, 0.5, 3), std::log2(direct), 1e-12);
}

TEST(Hausdorff, FastScheduleDecreases) {
  const Schedule s = Schedule::doubly_exponential(7);
  for (double e : {0.1, 0.5, 1.0}) {
    double prev = INFINITY;
    for (std::size_t k = 2; k <= 6; ++k) {
      const double b = hausdorff_content_upper_bound_log2(s, e, k);
      EXPECT_TRUE(std::isfinite(b));
      EXPECT_LT(b, prev);
      prev = b;
    }
  }
}

TEST(Hausdorff, SlowScheduleDoesNotVanish) {
  // δ_k = 2^{-k-1}: the bound grows instead of vanishing.
  std::vector<double> deltas;
  for (int k = 1; k <= 12; ++k) deltas.push_back(std::exp2(-k - 1));
  const Schedule s = Schedule::from_log2_unchecked([&] {
    std::vector<double> l;
    for (double d : deltas) l.push_back(std::log2(d));
    return l;
  }());
  double prev = 0.0;
  for (std::size_t k = 1; k < 11; ++k) {
    const double b = hausdorff_content_upper_bound(s, 0.5, k);
    EXPECT_GE(b, 1.0);
    EXPECT_GT(b, prev);
    prev = b;
  }
}

TEST(Hausdorff, Preconditions) {
  const Schedule s = Schedule::quadratic(1.0, 0.0, 2.0, 3);
  EXPECT_THROW(hausdorff_content_upper_bound_log2(s, 0.5, 3), Error);
  EXPECT_THROW(hausdorff_content_upper_bound_log2(s, 0.0, 1), Error);
  EXPECT_THROW(hausdorff_content_upper_bound_log2(s, 0.5, 0), Error);
}

TEST(CoverageGap, Examples) {
  const double h = std::sqrt(0.5);
  const std::vector<DipolePair> four{{{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}, {{0, 0}, {h, h}}, {{0, 0}, {-h, h}}};
  EXPECT_NEAR(coverage_gap(four), kPi / 4, 1e-12);
  const std::vector<DipolePair> axes{{{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}};
  EXPECT_NEAR(coverage_gap(axes), kPi / 2, 1e-12);
  const std::vector<DipolePair> one{{{0, 0}, {1, 0}}};
  EXPECT_NEAR(coverage_gap(one), kPi, 1e-12);
  const std::vector<DipolePair> bad{{{0, 0}, {2, 0}}};
  EXPECT_THROW(coverage_gap(bad), Error);
  EXPECT_THROW(coverage_gap({}), Error);
}

TEST(CoverageGap, SortedOracle) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::vector<DipolePair> pairs;
  std::vector<double> mod_pi;
  for (int i = 0; i < 50; ++i) {
    const double a = u(rng);
    pairs.push_back({{1, 2}, Point2{1, 2} + unit_vector(a)});
    mod_pi.push_back(std::fmod(a, kPi));
  }
  std::sort(mod_pi.begin(), mod_pi.end());
  double gap = mod_pi.front() + kPi - mod_pi.back();
  for (std::size_t i = 1; i < mod_pi.size(); ++i) gap = std::max(gap, mod_pi[i] - mod_pi[i - 1]);
  EXPECT_NEAR(coverage_gap(pairs), gap, 1e-9);
}

TEST(Hausdorff, SquaringScheduleStaysBoundedButNotMonotone) {
  // δ_{k+1} = δ_k²: both terms are O(1), and the head sum makes the bound rise at first.
  const Schedule s = Schedule::from_log2_unchecked({-2.0, -4.0, -8.0, -16.0, -32.0, -64.0});
  EXPECT_NEAR(hausdorff_content_upper_bound(s, 0.5, 1), 1.0, 1e-12);
  EXPECT_NEAR(hausdorff_content_upper_bound(s, 0.5, 2), 2.0, 1e-12);
  EXPECT_NEAR(hausdorff_content_upper_bound(s, 0.5, 3), 2.25, 1e-12);
  for (std::size_t k = 1; k <= 5; ++k) EXPECT_LE(hausdorff_content_upper_bound(s, 0.5, k), 3.0);
}
