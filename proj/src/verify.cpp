#include "dipole/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>

#include "dipole/config.hpp"
#include "dipole/dimension.hpp"
#include "dipole/discretization.hpp"
#include "dipole/quadruple.hpp"
#include "dipole/transfer.hpp"

namespace dipole::verify {

namespace {

constexpr double kSlack = 1e-9;

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " FAILED(" << what << ")";
    }
  }
};

Schedule desk_schedule(std::size_t stages) { return Schedule::quadratic(1.0, 0.0, 2.0, stages + 1); }

}  // namespace

struct Runner::State {
  std::optional<ConstructionAState> a;
  std::optional<ConstructionBState> b;
  double b_build_seconds = 0.0;
};

Profile profile_named(const std::string& name) {
  if (name == "desk") return Profile{};
  fail(ErrorKind::InvalidArgument, "unknown profile '" + name + "' (expected desk)");
}

std::string format_line(const Result& r) {
  std::ostringstream out;
  out << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.title << " | " << r.detail << " ("
      << fmt(r.seconds, 3) << "s)";
  return out.str();
}

Runner::Runner(Profile profile) : profile_(std::move(profile)), state_(std::make_unique<State>()) {}
Runner::~Runner() = default;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const ConstructionAState& need_a(std::optional<ConstructionAState>& a, const Profile& p) {
  if (!a) a = build_construction_a(desk_schedule(p.a_stages), p.a_stages);
  return *a;
}

void criterion_b_covering(const ConstructionBState& b, double build_seconds, Clock::time_point t0, Check& c) {
  std::vector<double> ks, logs;
  std::vector<double> counts;
  c.detail << "N_k(k=3..9)=";
  for (std::size_t k = 3; k <= 9; ++k) {
    const double n = static_cast<double>(splitting_multiplicity_count(b, k));
    counts.push_back(n);
    c.detail << (k == 3 ? "" : ",") << n;
    if (k >= 5) {
      ks.push_back(static_cast<double>(k));
      logs.push_back(std::log(n) / std::log(4.0));
    }
  }
  const double slope = least_squares_slope(ks, logs);
  c.detail << " slope(5..9)=" << fmt(slope) << " ratios=";
  bool ratios_ok = true;
  for (std::size_t i = 2; i + 1 < counts.size(); ++i) {
    const double ratio = counts[i + 1] / counts[i];
    c.detail << (i == 2 ? "" : ",") << fmt(ratio, 3);
    ratios_ok = ratios_ok && ratio >= 2.3 && ratio <= 3.5;
  }
  const double elapsed = seconds_since(t0) + build_seconds;
  c.detail << " runtime=" << fmt(elapsed, 3) << "s";
  c.require(slope >= 0.68 && slope <= 0.82, "slope in [0.68,0.82]");
  c.require(ratios_ok, "ratios in [2.3,3.5]");
  c.require(elapsed < 180.0, "runtime < 3 min");
}

void criterion_siblings(const ConstructionBState& b, Check& c) {
  // Baseline at n = 3 by brute force over every grandchild pair; the law holds
  // when all ratios over n = 3..7 stay within a factor 8 of each other.
  double intra_lo = INFINITY, intra_hi = 0.0, cross_lo = INFINITY, cross_hi = 0.0;
  for (std::size_t n = 3; n <= 7; ++n) {
    const SiblingStats s = sibling_distance_stats(b, n);
    const auto [ilo, ihi] = std::minmax_element(s.intra.begin(), s.intra.end());
    const auto [clo, chi] = std::minmax_element(s.cross.begin(), s.cross.end());
    if (n == 3) {
      c.detail << "baseline n=3 intra[" << fmt(*ilo) << "," << fmt(*ihi) << "] cross[" << fmt(*clo) << ","
               << fmt(*chi) << "]";
    }
    intra_lo = std::min(intra_lo, *ilo);
    intra_hi = std::max(intra_hi, *ihi);
    cross_lo = std::min(cross_lo, *clo);
    cross_hi = std::max(cross_hi, *chi);
  }
  const double intra_spread = intra_hi / intra_lo;
  const double cross_spread = cross_hi / cross_lo;
  c.detail << " spread(n=3..7) intra=" << fmt(intra_spread) << " cross=" << fmt(cross_spread);
  c.require(intra_lo > 0.0 && intra_spread <= 8.0, "intra spread <= 8");
  c.require(cross_lo > 0.0 && cross_spread <= 8.0, "cross spread <= 8");
}

void criterion_containment(const ConstructionAState& a, Check& c) {
  for (std::size_t k = 1; k <= 4; ++k) {
    const double d = containment_check(a, k);
    const double bound = 2.0 * a.schedule.delta(k);
    c.detail << (k == 1 ? "" : " ") << "k=" << k << ":" << fmt(d / bound, 6) << "x(2d_k)";
    c.require(d <= bound + kSlack, "k=" + std::to_string(k));
  }
}

void criterion_density(const ConstructionAState& a, Check& c) {
  for (std::size_t k = 1; k <= 4; ++k) {
    const auto pairs = generating_pairs_through(a, k);
    const double gap = coverage_gap(pairs);
    const double bound = 2.0 * a.schedule.delta(k);
    c.detail << (k == 1 ? "" : " ") << "k=" << k << ":" << fmt(gap / bound, 6) << "x(2d_k)";
    c.require(gap <= bound + kSlack, "k=" + std::to_string(k));
  }
}

void criterion_recursion(const ConstructionAState& a, Check& c) {
  const CoveringRecursion base = covering_recursion_check(a, 2);
  const double constant = static_cast<double>(base.covering) / base.reference;
  c.detail << "C=" << fmt(constant) << " (k=2, N=" << base.covering << ")";
  for (std::size_t k = 3; k <= 4; ++k) {
    const CoveringRecursion rec = covering_recursion_check(a, k);
    const double ratio = static_cast<double>(rec.covering) / rec.reference;
    c.detail << " k=" << k << ": N=" << rec.covering << " N/ref=" << fmt(ratio);
    c.require(ratio <= constant, "k=" + std::to_string(k));
  }
}

void criterion_exponent(const ConstructionAState& a, const ConstructionBState& b, Check& c) {
  const double at = lower_bound_exponent(2.0 / 7.0);
  c.require(at == 4.0 / 7.0, "exponent(2/7) == 4/7");
  const int steps = 10000;
  double best = -1.0, arg = 0.0;
  for (int i = 1; i < steps; ++i) {
    const double g = 0.5 * i / steps;
    const double v = lower_bound_exponent(g);
    if (v > best) {
      best = v;
      arg = g;
    }
  }
  c.require(std::abs(arg - 2.0 / 7.0) <= 1e-4, "argmax within 1e-4 of 2/7");
  const double delta = 0x1p-12;
  const DipoleConfiguration ca = build_configuration(generating_pairs_through(a, 4), delta);
  const DipoleConfiguration cb = build_configuration(construction_b_pairs(b, true), delta);
  const double ea = cell_count_exponent(ca), eb = cell_count_exponent(cb);
  c.detail << "exponent(2/7)=" << fmt(at, 17) << " argmax=" << fmt(arg, 6) << " cells A=" << ca.cells.size()
           << " exp=" << fmt(ea) << " B=" << cb.cells.size() << " exp=" << fmt(eb);
  c.require(ea >= 4.0 / 7.0 - 0.08, "A cell exponent");
  c.require(eb >= 4.0 / 7.0 - 0.08, "B cell exponent");
}

void criterion_annuli(const Profile& p, Check& c) {
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](bool tangent) {
    const double delta = std::pow(10.0, -6.0 + 3.0 * unit(rng));
    const double root = std::sqrt(delta);
    const double d = tangent ? 2.0 - root * unit(rng) : root + (2.0 - 2.0 * root) * unit(rng);
    const double phi = kTwoPi * unit(rng);
    return annuli_cover_oracle({0.0, 0.0}, d * unit_vector(phi), delta);
  };
  std::size_t two_ok = 0, one_ok = 0, survivors = 0;
  for (std::size_t i = 0; i < p.annuli_draws; ++i) {
    const AnnuliResult r = draw(false);
    survivors += r.survivors;
    two_ok += r.covered && r.mode == AnnuliMode::TwoWindows && !r.precondition_violated;
  }
  for (std::size_t i = 0; i < p.tangent_draws; ++i) {
    const AnnuliResult r = draw(true);
    survivors += r.survivors;
    one_ok += r.covered && r.mode == AnnuliMode::OneWindow;
  }
  c.detail << "two-window " << two_ok << "/" << p.annuli_draws << " one-window " << one_ok << "/" << p.tangent_draws
           << " survivors=" << survivors;
  c.require(two_ok == p.annuli_draws, "two-window draws");
  c.require(one_ok == p.tangent_draws, "near-tangent draws");
}

void criterion_cordoba(const ConstructionAState& a, const ConstructionBState& b, Check& c) {
  const auto pairs_a = generating_pairs_through(a, 3);
  const auto pairs_b = construction_b_pairs(b, true);
  const double gamma = 2.0 / 7.0;
  std::size_t graphs = 0;
  bool cs_ok = true;
  for (const auto& [label, pairs] : {std::pair{"A", &pairs_a}, std::pair{"B", &pairs_b}}) {
    double base = 0.0, worst = 0.0;
    c.detail << (label[0] == 'A' ? "" : " ") << label << ":";
    for (int e = 6; e <= 10; ++e) {
      const SuiteStats s = run_suite(*pairs, std::ldexp(1.0, -e), gamma);
      ++graphs;
      cs_ok = cs_ok && s.cauchy_schwarz;
      if (e == 6) base = s.cordoba_ratio;
      worst = std::max(worst, s.cordoba_ratio / base);
      c.detail << (e == 6 ? "" : ",") << fmt(s.cordoba_ratio, 3);
    }
    c.detail << " max/base=" << fmt(worst, 3);
    c.require(worst <= 2.0, std::string(label) + " ratio <= 2x base");
  }
  // Incidence graph on the π/10 arc of directions.
  SuiteOptions arc;
  arc.with_cordoba = false;
  arc.domain = {0.0, kPi / 10.0};
  for (double delta : {0x1p-8, 0x1p-10}) {
    for (const auto* pairs : {&pairs_a, &pairs_b}) {
      const SuiteStats s = run_suite(*pairs, delta, gamma, arc);
      ++graphs;
      cs_ok = cs_ok && s.cauchy_schwarz;
    }
  }
  c.detail << " cauchy-schwarz on " << graphs << " graphs";
  c.require(cs_ok, "sum deg^2 >= (sum deg)^2 / V");
}

void criterion_hausdorff(Check& c) {
  const Schedule sched = Schedule::doubly_exponential(7);
  for (double s : {0.1, 0.5, 1.0}) {
    c.detail << (s == 0.1 ? "" : " ") << "s=" << s << ":";
    double prev = INFINITY;
    for (std::size_t k = 2; k <= 6; ++k) {
      const double v = hausdorff_content_upper_bound_log2(sched, s, k);
      c.detail << (k == 2 ? "" : ",") << fmt(v, 3);
      c.require(v < prev, "s=" + fmt(s) + " k=" + std::to_string(k));
      prev = v;
    }
  }
  c.detail << " (log2)";
}

void criterion_estimators(const ConstructionAState& a, const ConstructionBState& b, const Profile& p, Check& c) {
  for (double exponent : {1.0, 2.0}) {
    CoverReport report;
    for (int j = 2; j <= 12; ++j) {
      const double r = std::ldexp(1.0, -j);
      report.entries.push_back({r, static_cast<std::uint64_t>(std::llround(3.0 * std::pow(1.0 / r, exponent)))});
    }
    const double slope = box_dimension_fit(report, FitMode::Upper);
    c.detail << "fit" << exponent << "=" << fmt(slope, 12) << " ";
    c.require(std::abs(slope - exponent) <= 1e-9, "power-law fit " + fmt(exponent));
  }

  const std::vector<Point2> pts = points_through(b, 6);
  const double r = 0x1p-7;
  std::mt19937_64 rng(p.seed ^ 0x5eedULL);
  std::uniform_real_distribution<double> shift(0.0, r);
  const double base = static_cast<double>(covering_count(pts, {}, r));
  double worst = 1.0;
  for (int i = 0; i < 5; ++i) {
    const double n = static_cast<double>(covering_count(pts, {}, r, {shift(rng), shift(rng)}));
    worst = std::max({worst, n / base, base / n});
  }
  c.detail << "origin-shift factor=" << fmt(worst, 3);
  c.require(worst <= 4.0, "origin shift <= 4");

  // Invariant battery.
  std::size_t checks = 0;
  auto inv = [&](bool cond, const std::string& what) {
    ++checks;
    c.require(cond, what);
  };

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const UnitArc arc{{unit(rng), unit(rng)}, kTwoPi * unit(rng), (unit(rng) - 0.5) * 4.0};
    const double delta = 0.01 + 0.2 * unit(rng);
    const ArcPartition part = partition_arc(arc, delta);
    bool ok = true;
    for (const UnitArc& piece : part.subarcs) {
      ok = ok && ((piece.length() >= delta - 1e-12 && piece.length() <= 2.0 * delta + 1e-12) ||
                  (part.subarcs.size() == 1 && arc.length() <= delta));
    }
    inv(ok, "partition piece lengths");
  }

  const AngularNet net = max_separated_directions(AngularInterval::full(), 0.01);
  bool separated = true;
  for (std::size_t i = 0; i < net.size(); ++i) separated = separated && net.gap_after(i) >= 0.01 - 1e-12;
  inv(separated, "net separation");

  const double delta = 0x1p-8;
  const DipoleConfiguration config = build_configuration(generating_pairs_through(a, 3), delta);
  bool assigned = config.pair_of.size() == config.net.size();
  for (double err : config.assignment_error) assigned = assigned && err <= 2.0 * delta + 1e-12;
  inv(assigned, "every net direction assigned");
  inv(config.pairs.size() <= 2 * config.net.size(), "#pairs <= 2 #net");
  std::vector<int> hit(config.cells.size(), 0);
  for (const SelectedPair& sp : config.pairs) hit[sp.x_cell] = hit[sp.y_cell] = 1;
  inv(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }), "every cell holds an endpoint");

  const GoodBad split = classify_good_bad(config, 2.0 / 7.0);
  std::vector<int> seen(config.net.size(), 0);
  for (auto e : split.good) ++seen[e];
  for (auto e : split.bad) ++seen[e];
  inv(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }), "good/bad partition");

  const IncidenceGraph graph = build_incidence_graph(config, split.bad);
  bool symmetric = true;
  for (std::uint32_t v = 0; v < graph.vertex_count(); ++v) {
    for (std::uint32_t u : graph.adjacency[v]) {
      symmetric = symmetric && std::binary_search(graph.adjacency[u].begin(), graph.adjacency[u].end(), v);
    }
  }
  inv(symmetric, "graph symmetry");
  bool labels = true;
  for (const GraphEdge& e : graph.edges) labels = labels && std::binary_search(split.bad.begin(), split.bad.end(), e.label);
  inv(labels, "edge labels bad");

  const auto values = kakeya_maximal(config.cell_keys(), delta, max_separated_directions(AngularInterval::full(), 0.05));
  inv(std::all_of(values.begin(), values.end(),
                  [&](const MaximalValue& m) { return m.value >= 0.0 && m.value <= 1.0 + 4.0 * delta; }),
      "kakeya values in [0, 1+4d]");

  std::vector<double> scales;
  for (int j = 2; j <= 10; ++j) scales.push_back(std::ldexp(1.0, -j));
  const CoverReport report = cover_report(pts, {}, scales);
  bool monotone = true;
  for (std::size_t i = 1; i < report.entries.size(); ++i) monotone = monotone && report.entries[i].count >= report.entries[i - 1].count;
  inv(monotone, "dyadic covering monotone");

  const Schedule squares = Schedule::from_log2_unchecked({-2.0, -4.0, -8.0, -16.0, -32.0, -64.0});
  bool decreasing = true;
  std::ostringstream trace;
  for (std::size_t k = 1; k + 1 <= squares.size(); ++k) {
    const double cur = hausdorff_content_upper_bound_log2(squares, 0.5, k);
    trace << (k == 1 ? "" : ",") << fmt(cur, 3);
    if (k >= 2) decreasing = decreasing && cur <= hausdorff_content_upper_bound_log2(squares, 0.5, k - 1);
  }
  inv(decreasing, "hausdorff bound non-increasing for delta_{k+1}=delta_k^2, s=0.5, log2 bound k=1..5: " + trace.str());

  bool lineage = true;
  for (const QuadPoint& q : b.points) {
    if (q.parent == kRootParent) continue;
    lineage = lineage &&
              std::abs(distance(q.host_centre, b.points[static_cast<std::size_t>(q.parent)].position) - 1.0) <= 1e-12 &&
              std::abs(distance(q.host_centre, q.position) - 1.0) <= 1e-12;
  }
  inv(lineage, "B host arcs pass through their parent");

  c.detail << " invariants=" << checks;
}

}  // namespace

Result Runner::run(int id) {
  static const char* const titles[] = {
      "",
      "construction B covering law",
      "construction B sibling distances",
      "construction A containment",
      "construction A direction density",
      "construction A covering recursion",
      "lower-bound exponent",
      "annuli covering oracle",
      "Cordoba ratio",
      "Hausdorff content bound",
      "estimator sanity",
  };
  Result result;
  result.id = id;
  if (id < 1 || id > kCriterionCount) fail(ErrorKind::InvalidArgument, "criterion id must be 1..10");
  result.title = titles[id];
  const auto t0 = Clock::now();
  Check c;
  try {
    auto need_b = [&]() -> const ConstructionBState& {
      if (!state_->b) {
        const auto tb = Clock::now();
        state_->b = build_construction_b(profile_.b_levels);
        state_->b_build_seconds = seconds_since(tb);
      }
      return *state_->b;
    };
    switch (id) {
      case 1: {
        const bool fresh = !state_->b;
        const auto& b = need_b();
        criterion_b_covering(b, fresh ? 0.0 : state_->b_build_seconds, fresh ? t0 : Clock::now(), c);
        break;
      }
      case 2: criterion_siblings(need_b(), c); break;
      case 3: criterion_containment(need_a(state_->a, profile_), c); break;
      case 4: criterion_density(need_a(state_->a, profile_), c); break;
      case 5: criterion_recursion(need_a(state_->a, profile_), c); break;
      case 6: criterion_exponent(need_a(state_->a, profile_), need_b(), c); break;
      case 7: criterion_annuli(profile_, c); break;
      case 8: criterion_cordoba(need_a(state_->a, profile_), need_b(), c); break;
      case 9: criterion_hausdorff(c); break;
      case 10: criterion_estimators(need_a(state_->a, profile_), need_b(), profile_, c); break;
    }
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail << " error: " << e.what();
  }
  result.passed = c.ok;
  result.detail = c.detail.str();
  result.seconds = seconds_since(t0);
  return result;
}

std::vector<Result> Runner::run_all(const std::function<void(const Result&)>& on_result) {
  std::vector<Result> results;
  for (int id = 1; id <= kCriterionCount; ++id) {
    results.push_back(run(id));
    if (on_result) on_result(results.back());
  }
  return results;
}

}  // namespace dipole::verify
