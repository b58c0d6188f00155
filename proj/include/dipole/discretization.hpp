#pragma once

// Scale-δ discretization of a set of unit-distance pairs: direction nets, cell
// covers, good/bad directions, the incidence graph on cells, the discretized
// Kakeya maximal operator and the two-annuli covering oracle.

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "dipole/dimension.hpp"
#include "dipole/geometry.hpp"
#include "dipole/spatial.hpp"

namespace dipole {

/// The pair chosen for one or more net directions, oriented so y - x is the realized direction.
struct SelectedPair {
  Point2 x;
  Point2 y;
  double direction = 0.0;
  std::uint32_t x_cell = 0;
  std::uint32_t y_cell = 0;
};

struct Cell {
  CellKey index;
  /// Net indices e whose selected pair starts in this cell. Empty for cells met
  /// only by second endpoints.
  std::vector<std::uint32_t> dir_set;
};

struct DipoleConfiguration {
  double delta = 0.0;
  AngularNet net;
  std::vector<SelectedPair> pairs;
  /// pair_of[e] indexes `pairs`; several net directions may share a pair.
  std::vector<std::uint32_t> pair_of;
  /// Angular error between net direction e and its pair's direction.
  std::vector<double> assignment_error;
  std::vector<Cell> cells;
  std::unordered_map<CellKey, std::uint32_t, CellKeyHash> cell_lookup;

  Grid grid() const { return Grid(delta, {}); }
  Point2 cell_centre(std::uint32_t c) const { return grid().cell_centre(cells[c].index); }
  std::optional<std::uint32_t> cell_of(Point2 p) const;
  std::vector<CellKey> cell_keys() const;
};

/// Builds E_δ over `domain`, picks for every net direction the input pair (either
/// orientation) nearest in direction, ties broken lexicographically on (x, y), and
/// covers the endpoints with δ-cells. A nonzero `choice_seed` instead picks a
/// uniformly random pair among those within 2δ. Throws CoverageInsufficient when
/// some net direction has no pair within 2δ, InvalidArgument when a pair is not unit.
DipoleConfiguration build_configuration(std::span<const DipolePair> pairs, double delta,
                                        AngularInterval domain = AngularInterval::full(),
                                        std::uint64_t choice_seed = 0);

/// Threshold count ⌈δ^{-γ}⌉ for good directions.
std::uint64_t good_threshold(double delta, double gamma);

struct GoodBad {
  std::vector<std::uint32_t> good;
  std::vector<std::uint32_t> bad;
};

/// e is good when some cell holds at least δ^{-γ} directions within angular
/// distance δ^{1/2} of e. Requires 0 < γ < 1/2.
GoodBad classify_good_bad(const DipoleConfiguration& config, double gamma);

struct GraphEdge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  /// Smallest bad net index realizing the edge.
  std::uint32_t label = 0;
};

struct IncidenceGraph {
  double delta = 0.0;
  /// Vertex centres, one per configuration cell.
  std::vector<Point2> centres;
  /// a < b, sorted by (a, b).
  std::vector<GraphEdge> edges;
  /// Sorted neighbour lists.
  std::vector<std::vector<std::uint32_t>> adjacency;

  std::size_t vertex_count() const { return centres.size(); }
  std::size_t degree(std::uint32_t v) const { return adjacency[v].size(); }
  /// Builds symmetric adjacency from `edges`, deduplicating unordered pairs.
  static IncidenceGraph from_edges(double delta, std::vector<Point2> centres, std::vector<GraphEdge> edges);
};

/// One edge (cell of x_e, cell of y_e) per bad direction e.
IncidenceGraph build_incidence_graph(const DipoleConfiguration& config, std::span<const std::uint32_t> bad);

struct CommonNeighbourStat {
  /// Largest #{C : C ~ C_1, C ~ C_2} over pairs with |c_1 - c_2| ≥ δ^{1/2}.
  std::uint64_t max_count = 0;
  /// max_count / δ^{-γ}.
  double ratio = 0.0;
  /// The same maximum over pairs closer than δ^{1/2}, reported only.
  std::uint64_t max_count_unseparated = 0;
};

CommonNeighbourStat common_neighbour_stat(const IncidenceGraph& graph, double gamma);

struct DegreePairs {
  std::uint32_t vertex = 0;
  std::uint64_t degree = 0;
  /// Ordered neighbour pairs at mutual distance ≥ δ^{1/2}.
  std::uint64_t far_pairs = 0;
};

/// Rows for vertices with degree > 100·δ^{-γ}.
std::vector<DegreePairs> deg_squared_pairs(const IncidenceGraph& graph, double gamma);

/// Σ_C deg(C)², the number of ordered triples (C_1, C_2, C_3) with C_1 ~ C_2, C_1 ~ C_3.
std::uint64_t triple_incidence_count(const IncidenceGraph& graph);

/// V·Σdeg² ≥ (Σdeg)² in exact integer arithmetic.
bool cauchy_schwarz_holds(const IncidenceGraph& graph);

struct MaximalValue {
  double direction = 0.0;
  double value = 0.0;
};

/// K_δ f for f the indicator of the union of δ-cells (grid anchored at the origin).
/// Tubes are quantized to slabs of width δ on a δ/2 lattice across the direction
/// and windows of length 1 on a 1/2 lattice along it; a cell is assigned to a
/// window by its centre and contributes its exact area inside each slab. The
/// result is within a factor 4 of the true supremum and never exceeds 1 + 4δ.
std::vector<MaximalValue> kakeya_maximal(std::span<const CellKey> cells, double delta, const AngularNet& directions);

/// ‖K_δ f‖₂ / (√log(1/δ) ‖f‖₂) with ‖K_δ f‖₂² = Σ value² · gap over the net.
double cordoba_ratio(std::span<const CellKey> cells, double delta, const AngularNet& directions);

enum class AnnuliMode { TwoWindows, OneWindow };

struct AngularWindow {
  double start = 0.0;
  double width = 0.0;
};

struct AnnuliResult {
  AnnuliMode mode = AnnuliMode::TwoWindows;
  bool covered = false;
  /// d < δ^{1/2}: outside the regime of the two-window claim.
  bool precondition_violated = false;
  std::size_t survivors = 0;
  std::vector<AngularWindow> windows;
};

/// Samples the unit circle about c1 at spacing δ/10 and keeps the points within
/// 10δ of the unit circle about c2. Checks the survivors fit in two angular windows
/// of width 100·δ^{1/2} (one window when |c1 - c2| > 2 - δ^{1/2}).
AnnuliResult annuli_cover_oracle(Point2 c1, Point2 c2, double delta);

/// min(2γ, 1 - γ, (2 - γ)/3) for 0 < γ < 1/2.
double lower_bound_exponent(double gamma);

/// log #cells / log(1/δ).
double cell_count_exponent(const DipoleConfiguration& config);

struct SuiteStats {
  double delta = 0.0;
  double gamma = 0.0;
  std::size_t n_net = 0;
  std::size_t n_pairs = 0;
  std::size_t n_cells = 0;
  std::size_t n_good = 0;
  std::size_t n_bad = 0;
  std::size_t n_edges = 0;
  double max_common_neighbour_ratio = 0.0;
  std::uint64_t triples = 0;
  /// NaN when skipped.
  double cordoba_ratio = 0.0;
  double cell_exponent = 0.0;
  bool cauchy_schwarz = true;
};

struct SuiteOptions {
  bool with_cordoba = true;
  AngularInterval domain = AngularInterval::full();
  /// 0 selects the nearest pair per direction; see build_configuration.
  std::uint64_t choice_seed = 0;
};

SuiteStats run_suite(std::span<const DipolePair> pairs, double delta, double gamma, const SuiteOptions& options = {});

}  // namespace dipole
