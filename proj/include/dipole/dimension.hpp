#pragma once

// Covering numbers and the dimension functionals built on them.
//
// Every count here is grid-anchored: the number of cells of a fixed grid that
// meet the set. It is within a universal constant factor of the minimal cube
// cover, which is all the ≈-level statements being checked require.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dipole/geometry.hpp"
#include "dipole/schedule.hpp"
#include "dipole/spatial.hpp"

namespace dipole {

/// Accumulates the distinct grid cells hit by points and arcs.
class CellSet {
 public:
  explicit CellSet(Grid grid);

  void add(Point2 p);
  void add(std::span<const Point2> points);
  /// Samples the arc at arclength spacing side/4, endpoints included.
  void add(const UnitArc& arc);

  /// Number of distinct cells seen so far.
  std::size_t count() const { return size_; }
  const Grid& grid() const { return grid_; }

 private:
  void insert(CellKey k);
  void grow();

  Grid grid_;
  // Open addressing; a slot is empty when its `i` equals kEmpty.
  std::vector<CellKey> slots_;
  std::size_t size_ = 0;
  CellKey last_{};
  bool has_last_ = false;
};

std::size_t covering_count(std::span<const Point2> points, std::span<const UnitArc> arcs, double r,
                           Point2 origin = {});

struct CoverEntry {
  double r = 0.0;
  std::uint64_t count = 0;
};

struct CoverReport {
  std::vector<CoverEntry> entries;
  /// Half-open index range [fit_begin, fit_end) used for fitting; empty means all.
  std::size_t fit_begin = 0;
  std::size_t fit_end = 0;
  /// Designated scale subsequence for lower-dimension fits.
  std::vector<std::size_t> designated;
  double fitted_slope = 0.0;

  /// r strictly decreasing; counts non-decreasing.
  void validate() const;
};

CoverReport cover_report(std::span<const Point2> points, std::span<const UnitArc> arcs, std::span<const double> scales,
                         Point2 origin = {});

/// base^{-e} for e = first..last.
std::vector<double> geometric_scales(double base, int first_exponent, int last_exponent);

enum class FitMode { Lower, Upper };

/// Least-squares slope of log N_r against log(1/r). Lower mode fits the designated
/// subsequence; upper mode fits every entry in the fit range.
double box_dimension_fit(const CoverReport& report, FitMode mode);

/// Plain least-squares slope of ys against xs.
double least_squares_slope(std::span<const double> xs, std::span<const double> ys);

struct AssouadSample {
  Point2 centre;
  double big_r = 0.0;
  double small_r = 0.0;
  std::uint64_t local_count = 0;
};

struct AssouadProfile {
  std::vector<AssouadSample> samples;
  double exponent_estimate = 0.0;
  std::size_t skipped_empty = 0;
};

AssouadProfile assouad_profile(std::span<const Point2> points, std::span<const std::pair<double, double>> scale_pairs,
                               std::span<const Point2> centres);

/// (2^{-j}, 2^{-j-m}) for j in [j_first, j_last], m in [m_first, m_last].
std::vector<std::pair<double, double>> dyadic_scale_pairs(int j_first, int j_last, int m_first, int m_last);

/// Up to `max_count` set points drawn without replacement with a fixed seed.
std::vector<Point2> sample_centres(std::span<const Point2> points, std::size_t max_count, std::uint64_t seed);

/// log2 of (Σ_{i≤k-1} δ_i^{-1}) δ_k^s + δ_k^{-1} δ_{k+1}^s, evaluated in log space.
double hausdorff_content_upper_bound_log2(const Schedule& schedule, double s, std::size_t k);
/// The same bound as a real number; underflows to 0 for super-exponential schedules.
double hausdorff_content_upper_bound(const Schedule& schedule, double s, std::size_t k);

struct DipolePair {
  Point2 x;
  Point2 y;
};

/// Largest circular gap between the directions ±(y - x) over all pairs.
double coverage_gap(std::span<const DipolePair> pairs);

}  // namespace dipole
