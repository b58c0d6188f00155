#include "dipole/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "dipole/config.hpp"

namespace dipole {

namespace {
constexpr std::size_t kInitialSlots = std::size_t{1} << 10;
constexpr std::int64_t kEmpty = std::numeric_limits<std::int64_t>::min();

long double log2_add(long double a, long double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  const long double hi = std::max(a, b);
  const long double lo = std::min(a, b);
  return hi + std::log2(1.0L + std::exp2(lo - hi));
}
}  // namespace

CellSet::CellSet(Grid grid) : grid_(grid), slots_(kInitialSlots, CellKey{kEmpty, 0}) {}

void CellSet::add(Point2 p) {
  const CellKey k = grid_.key(p);
  if (has_last_ && last_ == k) return;
  last_ = k;
  has_last_ = true;
  insert(k);
}

void CellSet::add(std::span<const Point2> points) {
  for (Point2 p : points) add(p);
}

void CellSet::add(const UnitArc& arc) {
  const double spacing = grid_.side / 4.0;
  const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(arc.length() / spacing)));
  for (std::size_t i = 0; i <= steps; ++i) {
    add(arc.point_at_angle(arc.start + arc.span * static_cast<double>(i) / static_cast<double>(steps)));
  }
}

void CellSet::insert(CellKey k) {
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t h = CellKeyHash{}(k) & mask;; h = (h + 1) & mask) {
    CellKey& slot = slots_[h];
    if (slot.i == kEmpty) {
      slot = k;
      if (++size_ * 2 > slots_.size()) grow();
      return;
    }
    if (slot == k) return;
  }
}

void CellSet::grow() {
  std::vector<CellKey> old(slots_.size() * 2, CellKey{kEmpty, 0});
  old.swap(slots_);
  size_ = 0;
  for (const CellKey& k : old) {
    if (k.i != kEmpty) insert(k);
  }
}

std::size_t covering_count(std::span<const Point2> points, std::span<const UnitArc> arcs, double r, Point2 origin) {
  if (!(r > 0.0)) fail(ErrorKind::InvalidArgument, "covering_count: r must be positive");
  CellSet cells(Grid(r, origin));
  cells.add(points);
  for (const UnitArc& arc : arcs) cells.add(arc);
  return cells.count();
}

void CoverReport::validate() const {
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (!(entries[i].r < entries[i - 1].r)) fail(ErrorKind::Precondition, "cover report: r must strictly decrease");
  }
}

CoverReport cover_report(std::span<const Point2> points, std::span<const UnitArc> arcs, std::span<const double> scales,
                         Point2 origin) {
  CoverReport report;
  for (double r : scales) report.entries.push_back({r, covering_count(points, arcs, r, origin)});
  report.fit_end = report.entries.size();
  report.validate();
  return report;
}

std::vector<double> geometric_scales(double base, int first_exponent, int last_exponent) {
  if (!(base > 1.0) || last_exponent < first_exponent) fail(ErrorKind::InvalidArgument, "geometric_scales: bad range");
  std::vector<double> scales;
  for (int e = first_exponent; e <= last_exponent; ++e) scales.push_back(std::pow(base, -e));
  return scales;
}

double least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) fail(ErrorKind::InvalidArgument, "least squares: need matched samples");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) fail(ErrorKind::InvalidArgument, "least squares: abscissae are constant");
  return sxy / sxx;
}

double box_dimension_fit(const CoverReport& report, FitMode mode) {
  report.validate();
  std::vector<std::size_t> idx;
  if (mode == FitMode::Lower) {
    if (report.designated.empty()) {
      fail(ErrorKind::Precondition, "lower fit needs a designated scale subsequence");
    }
    idx = report.designated;
  } else {
    const std::size_t end = report.fit_end == 0 ? report.entries.size() : report.fit_end;
    for (std::size_t i = report.fit_begin; i < end; ++i) idx.push_back(i);
  }
  if (idx.size() < 3) fail(ErrorKind::Precondition, "box_dimension_fit needs at least 3 entries");
  std::vector<double> xs, ys;
  for (std::size_t i : idx) {
    if (i >= report.entries.size()) fail(ErrorKind::InvalidArgument, "fit index outside report");
    const CoverEntry& e = report.entries[i];
    if (e.count == 0) fail(ErrorKind::InvalidArgument, "covering count must be positive");
    xs.push_back(-std::log(e.r));
    ys.push_back(std::log(static_cast<double>(e.count)));
  }
  if (std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); })) {
    fail(ErrorKind::InvalidArgument, "box_dimension_fit: degenerate (constant) data");
  }
  return least_squares_slope(xs, ys);
}

AssouadProfile assouad_profile(std::span<const Point2> points, std::span<const std::pair<double, double>> scale_pairs,
                               std::span<const Point2> centres) {
  std::map<double, std::vector<double>> by_radius;
  for (const auto& [big, small] : scale_pairs) {
    if (!(small > 0.0) || !(small < big)) fail(ErrorKind::InvalidArgument, "assouad_profile: need 0 < r < R");
    by_radius[big].push_back(small);
  }
  AssouadProfile profile;
  std::vector<std::size_t> hits;
  std::vector<Point2> local;
  for (const auto& [big, smalls] : by_radius) {
    const PointIndex index(points, big);
    for (Point2 c : centres) {
      hits.clear();
      index.within(c, big, hits);
      if (hits.empty()) {
        profile.skipped_empty += smalls.size();
        continue;
      }
      local.clear();
      for (std::size_t h : hits) local.push_back(points[h]);
      for (double small : smalls) {
        const auto count = covering_count(local, {}, small);
        profile.samples.push_back({c, big, small, count});
        profile.exponent_estimate =
            std::max(profile.exponent_estimate, std::log(static_cast<double>(count)) / std::log(big / small));
      }
    }
  }
  return profile;
}

std::vector<std::pair<double, double>> dyadic_scale_pairs(int j_first, int j_last, int m_first, int m_last) {
  std::vector<std::pair<double, double>> pairs;
  for (int j = j_first; j <= j_last; ++j) {
    for (int m = std::max(1, m_first); m <= m_last; ++m) pairs.emplace_back(std::exp2(-j), std::exp2(-j - m));
  }
  return pairs;
}

std::vector<Point2> sample_centres(std::span<const Point2> points, std::size_t max_count, std::uint64_t seed) {
  if (points.size() <= max_count) return {points.begin(), points.end()};
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::vector<Point2> out;
  out.reserve(max_count);
  for (std::size_t i = 0; i < max_count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (order.size() - i));
    std::swap(order[i], order[j]);
    out.push_back(points[order[i]]);
  }
  return out;
}

double hausdorff_content_upper_bound_log2(const Schedule& schedule, double s, std::size_t k) {
  if (!(s > 0.0)) fail(ErrorKind::InvalidArgument, "hausdorff bound: s must be positive");
  if (k == 0 || schedule.size() < k + 1) fail(ErrorKind::Precondition, "hausdorff bound: schedule too short");
  const long double log_dk = schedule.log2_delta(k);
  const long double log_dk1 = schedule.log2_delta(k + 1);
  long double head = -std::numeric_limits<long double>::infinity();
  for (std::size_t i = 1; i + 1 <= k; ++i) head = log2_add(head, -static_cast<long double>(schedule.log2_delta(i)));
  const long double first = head + static_cast<long double>(s) * log_dk;
  const long double second = -log_dk + static_cast<long double>(s) * log_dk1;
  return static_cast<double>(log2_add(first, second));
}

double hausdorff_content_upper_bound(const Schedule& schedule, double s, std::size_t k) {
  return std::exp2(hausdorff_content_upper_bound_log2(schedule, s, k));
}

double coverage_gap(std::span<const DipolePair> pairs) {
  if (pairs.empty()) fail(ErrorKind::InvalidArgument, "coverage_gap: no pairs");
  std::vector<double> angles;
  angles.reserve(2 * pairs.size());
  for (const DipolePair& p : pairs) {
    const UnitPairCheck check = unit_pair_direction(p.x, p.y, kTol.unit_pair);
    if (!check) fail(ErrorKind::Precondition, "coverage_gap: pair is not at unit distance");
    angles.push_back(check.direction.theta());
    angles.push_back(check.direction.antipode().theta());
  }
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + kTwoPi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
  return gap;
}

}  // namespace dipole
