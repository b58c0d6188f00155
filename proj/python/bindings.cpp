#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dipole/config.hpp"
#include "dipole/dimension.hpp"
#include "dipole/discretization.hpp"
#include "dipole/quadruple.hpp"
#include "dipole/transfer.hpp"

namespace py = pybind11;
using namespace dipole;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const std::vector<Point2>& points) {
  Array out({static_cast<py::ssize_t>(points.size()), py::ssize_t{2}});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < points.size(); ++i) {
    view(i, 0) = points[i].x;
    view(i, 1) = points[i].y;
  }
  return out;
}

std::vector<Point2> to_points(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw py::value_error("expected an (n, 2) array");
  auto view = a.unchecked<2>();
  std::vector<Point2> out(static_cast<std::size_t>(a.shape(0)));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) out[i] = {view(i, 0), view(i, 1)};
  return out;
}

std::vector<DipolePair> to_pairs(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 4) throw py::value_error("expected an (n, 4) array of x1, y1, x2, y2");
  auto view = a.unchecked<2>();
  std::vector<DipolePair> out(static_cast<std::size_t>(a.shape(0)));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) out[i] = {{view(i, 0), view(i, 1)}, {view(i, 2), view(i, 3)}};
  return out;
}

Array pairs_array(const std::vector<DipolePair>& pairs) {
  Array out({static_cast<py::ssize_t>(pairs.size()), py::ssize_t{4}});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    view(i, 0) = pairs[i].x.x;
    view(i, 1) = pairs[i].x.y;
    view(i, 2) = pairs[i].y.x;
    view(i, 3) = pairs[i].y.y;
  }
  return out;
}

py::tuple arc_tuple(const UnitArc& a) { return py::make_tuple(a.centre.x, a.centre.y, a.start, a.span); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dipole Kakeya constructions and covering checks";

  static py::exception<Error> error(m, "DipoleError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error(e.what());
    }
  });

  m.def("partition_arc", [](std::pair<double, double> centre, double start, double span, double delta) {
    return to_array(partition_arc({{centre.first, centre.second}, start, span}, delta).points);
  }, py::arg("centre"), py::arg("start"), py::arg("span"), py::arg("delta"));

  m.def("transfer_arcs", [](std::pair<double, double> centre, double start, double span, double delta) {
    const TransferResult t = transfer_arcs({{centre.first, centre.second}, start, span}, delta);
    py::list arcs;
    for (const UnitArc& a : t.arcs) arcs.append(arc_tuple(a));
    return py::make_tuple(to_array(t.points), arcs);
  }, py::arg("centre"), py::arg("start"), py::arg("span"), py::arg("delta"),
     "Cut points and transferred arcs (cx, cy, start, span).");

  m.def("construction_a", [](std::size_t k_max, double a, double b, double c) {
    const ConstructionAState s = build_construction_a(Schedule::quadratic(a, b, c, k_max + 1), k_max);
    py::list stages;
    for (const auto& level : s.points) stages.append(to_array(level));
    py::dict out;
    out["points"] = stages;
    out["pairs"] = pairs_array(generating_pairs_through(s, k_max));
    py::list contain;
    for (std::size_t k = 1; k + 1 <= k_max; ++k) contain.append(containment_check(s, k));
    out["containment"] = contain;
    return out;
  }, py::arg("k_max") = 3, py::arg("a") = 1.0, py::arg("b") = 0.0, py::arg("c") = 2.0,
     "Stages P_0..P_k, generating pairs, and containment distances for k < k_max.");

  m.def("construction_b", [](std::size_t levels, bool rotated) {
    const ConstructionBState s = build_construction_b(levels);
    std::vector<Point2> pts;
    std::vector<std::int64_t> stage, parent;
    for (const QuadPoint& q : s.points) {
      pts.push_back(q.position);
      stage.push_back(q.stage);
      parent.push_back(q.parent);
    }
    py::dict out;
    out["points"] = to_array(pts);
    out["stage"] = py::array_t<std::int64_t>(static_cast<py::ssize_t>(stage.size()), stage.data());
    out["parent"] = py::array_t<std::int64_t>(static_cast<py::ssize_t>(parent.size()), parent.data());
    out["pairs"] = pairs_array(construction_b_pairs(s, rotated));
    py::list counts;
    for (std::size_t k = 1; k <= levels; ++k) counts.append(splitting_multiplicity_count(s, k));
    out["counts"] = counts;
    return out;
  }, py::arg("levels") = 6, py::arg("rotated") = true,
     "Points with stage/parent lineage, dipole pairs, and N_k at r = 4^-k for k = 1..levels.");

  m.def("covering_count", [](const Array& points, double r, std::pair<double, double> origin) {
    return covering_count(to_points(points), {}, r, {origin.first, origin.second});
  }, py::arg("points"), py::arg("r"), py::arg("origin") = std::pair<double, double>{0.0, 0.0});

  m.def("box_dimension_fit", [](const std::vector<double>& rs, const std::vector<std::uint64_t>& counts) {
    if (rs.size() != counts.size()) throw py::value_error("rs and counts differ in length");
    CoverReport report;
    for (std::size_t i = 0; i < rs.size(); ++i) report.entries.push_back({rs[i], counts[i]});
    return box_dimension_fit(report, FitMode::Upper);
  }, py::arg("rs"), py::arg("counts"), "Least-squares slope of log N_r against log(1/r).");

  m.def("coverage_gap", [](const Array& pairs) { return coverage_gap(to_pairs(pairs)); }, py::arg("pairs"));

  m.def("hausdorff_content_upper_bound_log2", [](const std::vector<double>& log2_deltas, double s, std::size_t k) {
    return hausdorff_content_upper_bound_log2(Schedule::from_log2_unchecked(log2_deltas), s, k);
  }, py::arg("log2_deltas"), py::arg("s"), py::arg("k"));

  m.def("lower_bound_exponent", &lower_bound_exponent, py::arg("gamma"));

  m.def("annuli_cover_oracle", [](std::pair<double, double> c1, std::pair<double, double> c2, double delta) {
    const AnnuliResult r = annuli_cover_oracle({c1.first, c1.second}, {c2.first, c2.second}, delta);
    py::dict out;
    out["covered"] = r.covered;
    out["one_window"] = r.mode == AnnuliMode::OneWindow;
    out["precondition_violated"] = r.precondition_violated;
    out["survivors"] = r.survivors;
    py::list windows;
    for (const AngularWindow& w : r.windows) windows.append(py::make_tuple(w.start, w.width));
    out["windows"] = windows;
    return out;
  }, py::arg("c1"), py::arg("c2"), py::arg("delta"));

  m.def("run_suite", [](const Array& pairs, double delta, double gamma, bool with_cordoba) {
    SuiteOptions options;
    options.with_cordoba = with_cordoba;
    const SuiteStats s = run_suite(to_pairs(pairs), delta, gamma, options);
    py::dict out;
    out["delta"] = s.delta;
    out["gamma"] = s.gamma;
    out["n_net"] = s.n_net;
    out["n_pairs"] = s.n_pairs;
    out["n_cells"] = s.n_cells;
    out["n_good"] = s.n_good;
    out["n_bad"] = s.n_bad;
    out["n_edges"] = s.n_edges;
    out["max_common_neighbour_ratio"] = s.max_common_neighbour_ratio;
    out["triples"] = s.triples;
    out["cordoba_ratio"] = s.cordoba_ratio;
    out["cell_exponent"] = s.cell_exponent;
    out["cauchy_schwarz"] = s.cauchy_schwarz;
    return out;
  }, py::arg("pairs"), py::arg("delta"), py::arg("gamma") = 2.0 / 7.0, py::arg("with_cordoba") = true);
}
