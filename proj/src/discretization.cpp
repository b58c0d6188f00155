#include "dipole/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <tuple>

#include "dipole/config.hpp"

namespace dipole {

namespace {

struct Candidate {
  double angle = 0.0;
  Point2 x;
  Point2 y;
};

auto lex_key(const Candidate& c) { return std::tie(c.x.x, c.x.y, c.y.x, c.y.y); }

bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.angle != b.angle) return a.angle < b.angle;
  return lex_key(a) < lex_key(b);
}

std::uint32_t intern_cell(DipoleConfiguration& config, Point2 p) {
  const CellKey key = config.grid().key(p);
  const auto [it, inserted] = config.cell_lookup.try_emplace(key, static_cast<std::uint32_t>(config.cells.size()));
  if (inserted) config.cells.push_back({key, {}});
  return it->second;
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 0.5)) fail(ErrorKind::InvalidArgument, "gamma must lie in (0, 1/2)");
}

// Marks net indices whose angle lies in [lo, hi] (an arc shorter than 2π).
void mark_arc(const std::vector<double>& angles, double lo, double hi, std::vector<int>& diff) {
  constexpr double eps = 1e-12;
  const double start = normalize_angle(lo);
  const double stop = start + (hi - lo);
  auto mark = [&](double a, double b) {
    const auto first = std::lower_bound(angles.begin(), angles.end(), a - eps) - angles.begin();
    const auto last = std::upper_bound(angles.begin(), angles.end(), b + eps) - angles.begin();
    if (first < last) {
      ++diff[static_cast<std::size_t>(first)];
      --diff[static_cast<std::size_t>(last)];
    }
  };
  mark(start, std::min(stop, kTwoPi));
  if (stop >= kTwoPi) mark(0.0, stop - kTwoPi);
}

// CDF of U[-p, p] + U[-q, q] with p ≥ q ≥ 0.
double trapezoid_cdf(double t, double p, double q) {
  if (t <= -(p + q)) return 0.0;
  if (t >= p + q) return 1.0;
  if (q <= 1e-14 * p) return std::clamp((t + p) / (2.0 * p), 0.0, 1.0);
  if (t <= -(p - q)) return (t + p + q) * (t + p + q) / (8.0 * p * q);
  if (t <= p - q) return (t + p) / (2.0 * p);
  return 1.0 - (p + q - t) * (p + q - t) / (8.0 * p * q);
}

}  // namespace

std::optional<std::uint32_t> DipoleConfiguration::cell_of(Point2 p) const {
  const auto it = cell_lookup.find(grid().key(p));
  if (it == cell_lookup.end()) return std::nullopt;
  return it->second;
}

std::vector<CellKey> DipoleConfiguration::cell_keys() const {
  std::vector<CellKey> keys;
  keys.reserve(cells.size());
  for (const Cell& c : cells) keys.push_back(c.index);
  return keys;
}

DipoleConfiguration build_configuration(std::span<const DipolePair> pairs, double delta, AngularInterval domain,
                                        std::uint64_t choice_seed) {
  if (!(delta > 0.0)) fail(ErrorKind::InvalidArgument, "build_configuration: delta must be positive");
  if (pairs.empty()) fail(ErrorKind::InvalidArgument, "build_configuration: no pairs");

  std::vector<Candidate> candidates;
  candidates.reserve(2 * pairs.size());
  for (const DipolePair& pr : pairs) {
    const UnitPairCheck check = unit_pair_direction(pr.x, pr.y, kTol.unit_pair);
    if (!check) {
      fail(ErrorKind::InvalidArgument, "build_configuration: pair at distance " + std::to_string(check.distance));
    }
    candidates.push_back({check.direction.theta(), pr.x, pr.y});
    candidates.push_back({check.direction.antipode().theta(), pr.y, pr.x});
  }
  std::sort(candidates.begin(), candidates.end(), candidate_less);

  DipoleConfiguration config;
  config.delta = delta;
  config.net = max_separated_directions(domain, delta);
  const std::size_t n = candidates.size();
  const double tolerance = 2.0 * delta * (1.0 + kTol.count_slack) + kTol.geometric;
  std::unordered_map<std::size_t, std::uint32_t> chosen;
  std::mt19937_64 rng(choice_seed);
  std::vector<std::size_t> within;
  auto by_angle = [](const Candidate& c, double v) { return c.angle < v; };

  for (std::size_t e = 0; e < config.net.size(); ++e) {
    const double a = config.net.angles[e];
    const auto above_it = std::lower_bound(candidates.begin(), candidates.end(), a,
                                           [](const Candidate& c, double v) { return c.angle < v; });
    const std::size_t above = static_cast<std::size_t>(above_it - candidates.begin()) % n;
    // First candidate of the run of equal angles just below `a`, circularly.
    const double below_angle = candidates[(above + n - 1) % n].angle;
    const std::size_t below = static_cast<std::size_t>(
        std::lower_bound(candidates.begin(), candidates.end(), below_angle,
                         [](const Candidate& c, double v) { return c.angle < v; }) -
        candidates.begin());
    const double err_above = angular_distance(a, candidates[above].angle);
    const double err_below = angular_distance(a, candidates[below].angle);
    std::size_t pick = above;
    double err = err_above;
    if (err_below < err_above || (err_below == err_above && lex_key(candidates[below]) < lex_key(candidates[above]))) {
      pick = below;
      err = err_below;
    }
    if (err > tolerance) {
      fail(ErrorKind::CoverageInsufficient, "build_configuration: no pair within 2*delta of net direction " +
                                                std::to_string(a) + " (nearest " + std::to_string(err) + ")");
    }
    if (choice_seed != 0) {
      within.clear();
      auto collect = [&](double lo, double hi) {
        auto first = std::lower_bound(candidates.begin(), candidates.end(), lo, by_angle);
        for (auto it = first; it != candidates.end() && it->angle <= hi; ++it) {
          within.push_back(static_cast<std::size_t>(it - candidates.begin()));
        }
      };
      const double lo = a - tolerance, hi = a + tolerance;
      collect(std::max(lo, 0.0), std::min(hi, kTwoPi));
      if (lo < 0.0) collect(lo + kTwoPi, kTwoPi);
      if (hi >= kTwoPi) collect(0.0, hi - kTwoPi);
      within.erase(std::remove_if(within.begin(), within.end(),
                                  [&](std::size_t i) { return angular_distance(a, candidates[i].angle) > tolerance; }),
                   within.end());
      if (!within.empty()) {
        pick = within[std::uniform_int_distribution<std::size_t>(0, within.size() - 1)(rng)];
        err = angular_distance(a, candidates[pick].angle);
      }
    }
    const auto [it, inserted] = chosen.try_emplace(pick, static_cast<std::uint32_t>(config.pairs.size()));
    if (inserted) {
      const Candidate& c = candidates[pick];
      SelectedPair sp{c.x, c.y, c.angle, 0, 0};
      sp.x_cell = intern_cell(config, c.x);
      sp.y_cell = intern_cell(config, c.y);
      config.pairs.push_back(sp);
    }
    config.pair_of.push_back(it->second);
    config.assignment_error.push_back(err);
    config.cells[config.pairs[it->second].x_cell].dir_set.push_back(static_cast<std::uint32_t>(e));
  }
  return config;
}

std::uint64_t good_threshold(double delta, double gamma) {
  return static_cast<std::uint64_t>(std::ceil(std::pow(delta, -gamma) - 1e-9));
}

GoodBad classify_good_bad(const DipoleConfiguration& config, double gamma) {
  check_gamma(gamma);
  const std::uint64_t threshold = good_threshold(config.delta, gamma);
  const double radius = std::sqrt(config.delta);
  const std::vector<double>& angles = config.net.angles;
  std::vector<int> diff(angles.size() + 1, 0);
  std::vector<double> ext;
  for (const Cell& cell : config.cells) {
    const std::size_t m = cell.dir_set.size();
    if (m == 0 || m < threshold) continue;
    ext.clear();
    for (std::uint32_t e : cell.dir_set) ext.push_back(angles[e]);
    for (std::size_t i = 0; i < m; ++i) ext.push_back(ext[i] + kTwoPi);
    const std::size_t t = static_cast<std::size_t>(threshold);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + t - 1;
      if (ext[j] - ext[i] <= 2.0 * radius + 1e-12) mark_arc(angles, ext[j] - radius, ext[i] + radius, diff);
    }
  }
  GoodBad out;
  int running = 0;
  for (std::size_t e = 0; e < angles.size(); ++e) {
    running += diff[e];
    (running > 0 ? out.good : out.bad).push_back(static_cast<std::uint32_t>(e));
  }
  return out;
}

IncidenceGraph IncidenceGraph::from_edges(double delta, std::vector<Point2> centres, std::vector<GraphEdge> edges) {
  IncidenceGraph g;
  g.delta = delta;
  g.centres = std::move(centres);
  for (GraphEdge& e : edges) {
    if (e.a >= g.centres.size() || e.b >= g.centres.size()) fail(ErrorKind::InvalidArgument, "edge outside graph");
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  std::erase_if(edges, [](const GraphEdge& e) { return e.a == e.b; });
  std::sort(edges.begin(), edges.end(),
            [](const GraphEdge& l, const GraphEdge& r) { return std::tie(l.a, l.b, l.label) < std::tie(r.a, r.b, r.label); });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const GraphEdge& l, const GraphEdge& r) { return l.a == r.a && l.b == r.b; }),
              edges.end());
  g.edges = std::move(edges);
  g.adjacency.assign(g.centres.size(), {});
  for (const GraphEdge& e : g.edges) {
    g.adjacency[e.a].push_back(e.b);
    g.adjacency[e.b].push_back(e.a);
  }
  for (auto& nb : g.adjacency) std::sort(nb.begin(), nb.end());
  return g;
}

IncidenceGraph build_incidence_graph(const DipoleConfiguration& config, std::span<const std::uint32_t> bad) {
  std::vector<Point2> centres;
  centres.reserve(config.cells.size());
  for (std::uint32_t c = 0; c < config.cells.size(); ++c) centres.push_back(config.cell_centre(c));
  std::vector<GraphEdge> edges;
  edges.reserve(bad.size());
  for (std::uint32_t e : bad) {
    if (e >= config.pair_of.size()) fail(ErrorKind::InvalidArgument, "bad direction index outside net");
    const SelectedPair& p = config.pairs[config.pair_of[e]];
    edges.push_back({p.x_cell, p.y_cell, e});
  }
  return IncidenceGraph::from_edges(config.delta, std::move(centres), std::move(edges));
}

CommonNeighbourStat common_neighbour_stat(const IncidenceGraph& graph, double gamma) {
  check_gamma(gamma);
  const double radius = std::sqrt(graph.delta);
  std::unordered_map<std::uint64_t, std::uint32_t> separated, close;
  for (const auto& nb : graph.adjacency) {
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        const std::uint64_t key = (std::uint64_t{nb[i]} << 32) | nb[j];
        auto& table = distance(graph.centres[nb[i]], graph.centres[nb[j]]) >= radius ? separated : close;
        ++table[key];
      }
    }
  }
  CommonNeighbourStat stat;
  for (const auto& [key, count] : separated) stat.max_count = std::max<std::uint64_t>(stat.max_count, count);
  for (const auto& [key, count] : close) stat.max_count_unseparated = std::max<std::uint64_t>(stat.max_count_unseparated, count);
  stat.ratio = static_cast<double>(stat.max_count) / std::pow(graph.delta, -gamma);
  return stat;
}

std::vector<DegreePairs> deg_squared_pairs(const IncidenceGraph& graph, double gamma) {
  check_gamma(gamma);
  const double threshold = 100.0 * std::pow(graph.delta, -gamma);
  const double radius = std::sqrt(graph.delta);
  std::vector<DegreePairs> rows;
  for (std::uint32_t v = 0; v < graph.vertex_count(); ++v) {
    const auto& nb = graph.adjacency[v];
    if (!(static_cast<double>(nb.size()) > threshold)) continue;
    std::uint64_t far = 0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (distance(graph.centres[nb[i]], graph.centres[nb[j]]) >= radius) far += 2;
      }
    }
    rows.push_back({v, nb.size(), far});
  }
  return rows;
}

std::uint64_t triple_incidence_count(const IncidenceGraph& graph) {
  std::uint64_t total = 0;
  for (const auto& nb : graph.adjacency) total += std::uint64_t{nb.size()} * nb.size();
  return total;
}

bool cauchy_schwarz_holds(const IncidenceGraph& graph) {
  unsigned __int128 sum = 0;
  for (const auto& nb : graph.adjacency) sum += nb.size();
  const unsigned __int128 lhs = static_cast<unsigned __int128>(graph.vertex_count()) * triple_incidence_count(graph);
  return lhs >= sum * sum;
}

std::vector<MaximalValue> kakeya_maximal(std::span<const CellKey> cells, double delta, const AngularNet& directions) {
  if (cells.empty()) fail(ErrorKind::InvalidArgument, "kakeya_maximal: empty cell set");
  if (!(delta > 0.0)) fail(ErrorKind::InvalidArgument, "kakeya_maximal: delta must be positive");
  std::vector<CellKey> keys(cells.begin(), cells.end());
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  const Grid grid(delta, {});
  std::vector<Point2> centres;
  centres.reserve(keys.size());
  Point2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point2 hi = -1.0 * lo;
  for (const CellKey& k : keys) {
    const Point2 c = grid.cell_centre(k);
    centres.push_back(c);
    lo = {std::min(lo.x, c.x), std::min(lo.y, c.y)};
    hi = {std::max(hi.x, c.x), std::max(hi.y, c.y)};
  }
  if (distance(lo, hi) > 4.0 + 2.0 * delta) fail(ErrorKind::Precondition, "kakeya_maximal: cells span more than diameter 4");

  const double half = delta / 2.0;
  const double area = delta * delta;
  std::vector<double> v(keys.size()), w(keys.size()), acc;
  std::vector<MaximalValue> out;
  out.reserve(directions.size());
  for (double theta : directions.angles) {
    const double cs = std::cos(theta), sn = std::sin(theta);
    const double pa = delta * std::abs(sn) / 2.0, pb = delta * std::abs(cs) / 2.0;
    const double p = std::max(pa, pb), q = std::min(pa, pb);
    double v_min = std::numeric_limits<double>::infinity(), v_max = -v_min;
    double w_min = v_min, w_max = -v_min;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      v[i] = -sn * centres[i].x + cs * centres[i].y;
      w[i] = cs * centres[i].x + sn * centres[i].y;
      v_min = std::min(v_min, v[i]);
      v_max = std::max(v_max, v[i]);
      w_min = std::min(w_min, w[i]);
      w_max = std::max(w_max, w[i]);
    }
    const auto j0 = static_cast<std::int64_t>(std::floor((v_min - p - q) / half));
    const auto bands = static_cast<std::size_t>(std::floor((v_max + p + q) / half) - static_cast<double>(j0)) + 2;
    const auto windows = static_cast<std::size_t>(std::floor(2.0 * (w_max - w_min))) + 2;
    acc.assign(bands * windows, 0.0);
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const auto m = std::min(static_cast<std::size_t>(std::floor(2.0 * (w[i] - w_min))), windows - 1);
      const auto j_lo = static_cast<std::int64_t>(std::floor((v[i] - p - q) / half));
      const auto j_hi = static_cast<std::int64_t>(std::floor((v[i] + p + q) / half));
      double below = trapezoid_cdf(static_cast<double>(j_lo) * half - v[i], p, q);
      for (std::int64_t j = j_lo; j <= j_hi; ++j) {
        const double above = trapezoid_cdf(static_cast<double>(j + 1) * half - v[i], p, q);
        const double piece = area * (above - below);
        below = above;
        const auto col = static_cast<std::size_t>(j - j0);
        acc[m * bands + col] += piece;
        if (m > 0) acc[(m - 1) * bands + col] += piece;
      }
    }
    double best = 0.0;
    for (std::size_t m = 0; m < windows; ++m) {
      const double* row = &acc[m * bands];
      for (std::size_t j = 0; j + 1 < bands; ++j) best = std::max(best, row[j] + row[j + 1]);
    }
    out.push_back({theta, best / delta});
  }
  return out;
}

double cordoba_ratio(std::span<const CellKey> cells, double delta, const AngularNet& directions) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorKind::InvalidArgument, "cordoba_ratio: need 0 < delta < 1");
  const std::vector<MaximalValue> values = kakeya_maximal(cells, delta, directions);
  double k2 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) k2 += values[i].value * values[i].value * directions.gap_after(i);
  std::vector<CellKey> keys(cells.begin(), cells.end());
  std::sort(keys.begin(), keys.end());
  const auto distinct = static_cast<double>(std::unique(keys.begin(), keys.end()) - keys.begin());
  const double f2 = delta * delta * distinct;
  return std::sqrt(k2) / (std::sqrt(std::log(1.0 / delta)) * std::sqrt(f2));
}

AnnuliResult annuli_cover_oracle(Point2 c1, Point2 c2, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorKind::InvalidArgument, "annuli_cover_oracle: need 0 < delta < 1");
  const double d = distance(c1, c2);
  const double root = std::sqrt(delta);
  AnnuliResult result;
  result.mode = d > 2.0 - root ? AnnuliMode::OneWindow : AnnuliMode::TwoWindows;
  result.precondition_violated = d < root;

  const double step = delta / 10.0;
  const auto samples = static_cast<std::size_t>(std::ceil(kTwoPi / step));
  const double inner = std::max(0.0, 1.0 - 10.0 * delta);
  const double lo2 = inner * inner, hi2 = (1.0 + 10.0 * delta) * (1.0 + 10.0 * delta);
  const double rc = std::cos(step), rs = std::sin(step);
  const Point2 offset = c1 - c2;
  constexpr std::size_t block = 4096;
  std::vector<double> kept;
  for (std::size_t b = 0; b < samples; b += block) {
    const double t0 = static_cast<double>(b) * step;
    double cx = std::cos(t0), sy = std::sin(t0);
    const std::size_t end = std::min(samples, b + block);
    for (std::size_t i = b; i < end; ++i) {
      const double px = offset.x + cx, py = offset.y + sy;
      const double r2 = px * px + py * py;
      if (r2 >= lo2 && r2 <= hi2) kept.push_back(static_cast<double>(i) * step);
      const double nx = cx * rc - sy * rs;
      sy = cx * rs + sy * rc;
      cx = nx;
    }
  }
  result.survivors = kept.size();
  if (kept.empty()) {
    result.covered = true;
    return result;
  }

  const double width = 100.0 * root;
  const double eps = 1e-12;
  const std::size_t n = kept.size();
  std::vector<double> ext(kept);
  for (std::size_t i = 0; i < n; ++i) ext.push_back(kept[i] + kTwoPi);
  auto reach = [&](std::size_t from) {
    return static_cast<std::size_t>(std::upper_bound(ext.begin() + static_cast<std::ptrdiff_t>(from), ext.end(),
                                                     ext[from] + width + eps) -
                                    ext.begin());
  };
  const std::size_t allowed = result.mode == AnnuliMode::OneWindow ? 1 : 2;
  for (std::size_t i = 0; i < n && !result.covered; ++i) {
    const std::size_t j = reach(i);
    if (j >= i + n) {
      result.covered = true;
      result.windows = {{normalize_angle(ext[i]), width}};
    } else if (allowed == 2 && reach(j) >= i + n) {
      result.covered = true;
      result.windows = {{normalize_angle(ext[i]), width}, {normalize_angle(ext[j]), width}};
    }
  }
  return result;
}

double lower_bound_exponent(double gamma) {
  check_gamma(gamma);
  return std::min({2.0 * gamma, 1.0 - gamma, (2.0 - gamma) / 3.0});
}

double cell_count_exponent(const DipoleConfiguration& config) {
  if (config.cells.empty()) fail(ErrorKind::InvalidArgument, "cell_count_exponent: no cells");
  return std::log(static_cast<double>(config.cells.size())) / std::log(1.0 / config.delta);
}

SuiteStats run_suite(std::span<const DipolePair> pairs, double delta, double gamma, const SuiteOptions& options) {
  const DipoleConfiguration config = build_configuration(pairs, delta, options.domain, options.choice_seed);
  const GoodBad split = classify_good_bad(config, gamma);
  const IncidenceGraph graph = build_incidence_graph(config, split.bad);
  SuiteStats s;
  s.delta = delta;
  s.gamma = gamma;
  s.n_net = config.net.size();
  s.n_pairs = config.pairs.size();
  s.n_cells = config.cells.size();
  s.n_good = split.good.size();
  s.n_bad = split.bad.size();
  s.n_edges = graph.edges.size();
  s.max_common_neighbour_ratio = common_neighbour_stat(graph, gamma).ratio;
  s.triples = triple_incidence_count(graph);
  s.cauchy_schwarz = cauchy_schwarz_holds(graph);
  s.cordoba_ratio = options.with_cordoba ? cordoba_ratio(config.cell_keys(), delta, config.net)
                                         : std::numeric_limits<double>::quiet_NaN();
  s.cell_exponent = cell_count_exponent(config);
  return s;
}

}  // namespace dipole
