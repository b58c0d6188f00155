#include "dipole/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>

#include "dipole/config.hpp"
#include "dipole/csv.hpp"
#include "dipole/dimension.hpp"
#include "dipole/discretization.hpp"
#include "dipole/quadruple.hpp"
#include "dipole/transfer.hpp"
#include "dipole/verify.hpp"

namespace dipole::cli {

namespace {

constexpr const char* kOutDirEnv = "DIPOLE_OUT_DIR";

std::string trim(std::string s) {
  const auto keep = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), keep));
  s.erase(std::find_if(s.rbegin(), s.rend(), keep).base(), s.end());
  return s;
}

bool has_flag(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

/// Output target: a file when a path is given or DIPOLE_OUT_DIR is set, else `fallback`.
class Output {
 public:
  Output(const std::string& path, const std::string& default_name, std::ostream& fallback) {
    std::string target = path;
    if (target.empty()) {
      if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') {
        target = (std::filesystem::path(dir) / default_name).string();
      }
    }
    if (target.empty() || target == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(target, std::ios::binary);
    if (!*file_) fail(ErrorKind::Io, "cannot write '" + target + "'");
    stream_ = file_.get();
  }

  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::vector<double> parse_scales(const std::string& spec) {
  constexpr std::string_view prefix = "auto-dyadic:";
  std::vector<double> scales;
  if (spec.rfind(prefix, 0) == 0) {
    std::vector<std::string> fields;
    const std::string body = spec.substr(prefix.size());
    for (std::size_t pos = 0;;) {
      const std::size_t colon = body.find(':', pos);
      fields.push_back(body.substr(pos, colon - pos));
      if (colon == std::string::npos) break;
      pos = colon + 1;
    }
    if (fields.size() != 2) fail(ErrorKind::InvalidArgument, "scales: expected auto-dyadic:FIRST:LAST");
    const auto first = csv::parse_int(fields[0]);
    const auto last = csv::parse_int(fields[1]);
    if (first > last || first < 0 || last > 40) fail(ErrorKind::InvalidArgument, "scales: need 0 <= FIRST <= LAST <= 40");
    for (auto j = first; j <= last; ++j) scales.push_back(std::ldexp(1.0, static_cast<int>(-j)));
    return scales;
  }
  for (const auto& field : csv::split_line(spec)) scales.push_back(csv::parse_double(trim(field)));
  if (scales.empty()) fail(ErrorKind::InvalidArgument, "scales: empty list");
  for (double r : scales) {
    if (!(r > 0.0)) fail(ErrorKind::InvalidArgument, "scales: every r must be positive");
  }
  std::sort(scales.begin(), scales.end(), std::greater<>());
  if (std::adjacent_find(scales.begin(), scales.end()) != scales.end()) {
    fail(ErrorKind::InvalidArgument, "scales: duplicate r");
  }
  return scales;
}

struct ScheduleArgs {
  double a = 1.0;
  double b = 0.0;
  double c = 2.0;
};

void add_schedule_options(CLI::App* cmd, ScheduleArgs& s) {
  cmd->add_option("--schedule-a", s.a, "delta_k = 2^-(a k^2 + b k + c): a")->capture_default_str();
  cmd->add_option("--schedule-b", s.b, "schedule coefficient b")->capture_default_str();
  cmd->add_option("--schedule-c", s.c, "schedule coefficient c")->capture_default_str();
}

struct Options {
  std::string out;
  std::uint64_t cap = kLimits.point_cap;
  // construct-a
  std::size_t k_max = 3;
  ScheduleArgs schedule;
  std::string pairs_out;
  // construct-b
  std::size_t levels = 6;
  std::string lineage_out;
  // dims
  std::string points_in;
  std::string scales = "auto-dyadic:2:10";
  double origin_x = 0.0;
  double origin_y = 0.0;
  bool fit = false;
  // coverage / suite
  std::string construction = "a";
  std::string pairs_in;
  bool rotated = true;
  std::vector<double> deltas{0x1p-8};
  std::vector<double> gammas{2.0 / 7.0};
  bool no_cordoba = false;
  bool arc_domain = false;
  std::uint64_t choice_seed = 0;
  // oracle
  std::size_t draws = 200;
  std::size_t tangent_draws = 50;
  std::uint64_t seed = 20240611;
  // verify-all
  std::string profile = "desk";
};

std::vector<DipolePair> read_pairs(const std::string& path) {
  const csv::Table table = csv::read_file(path);
  const std::size_t cx1 = table.column("x1"), cy1 = table.column("y1");
  const std::size_t cx2 = table.column("x2"), cy2 = table.column("y2");
  std::vector<DipolePair> pairs;
  for (const auto& row : table.rows) {
    pairs.push_back({{csv::parse_double(row[cx1]), csv::parse_double(row[cy1])},
                     {csv::parse_double(row[cx2]), csv::parse_double(row[cy2])}});
  }
  return pairs;
}

Schedule make_schedule(const Options& o) {
  return Schedule::quadratic(o.schedule.a, o.schedule.b, o.schedule.c, o.k_max + 1);
}

std::vector<DipolePair> construction_pairs(const Options& o) {
  if (!o.pairs_in.empty()) return read_pairs(o.pairs_in);
  if (o.construction == "a") {
    const ConstructionAState a = build_construction_a(make_schedule(o), o.k_max, o.cap);
    return generating_pairs_through(a, o.k_max);
  }
  const ConstructionBState b = build_construction_b(o.levels, o.cap);
  return construction_b_pairs(b, o.rotated);
}

int cmd_construct_a(const Options& o, std::ostream& out) {
  const ConstructionAState a = build_construction_a(make_schedule(o), o.k_max, o.cap);
  Output sink(o.out, "construction_a.csv", out);
  csv::Writer w(sink.stream());
  w.row({"stage", "x", "y"});
  for (std::size_t k = 0; k <= a.stage; ++k) {
    for (Point2 p : a.points[k]) w.row({csv::format(std::uint64_t{k}), csv::format(p.x), csv::format(p.y)});
  }
  if (!o.pairs_out.empty()) {
    Output pairs(o.pairs_out, "", out);
    csv::Writer pw(pairs.stream());
    pw.row({"stage", "x1", "y1", "x2", "y2"});
    for (const GeneratingPair& g : a.pairs) {
      pw.row({csv::format(std::uint64_t{g.stage}), csv::format(g.centre.x), csv::format(g.centre.y),
              csv::format(g.point.x), csv::format(g.point.y)});
    }
  }
  return kOk;
}

int cmd_construct_b(const Options& o, std::ostream& out) {
  const ConstructionBState b = build_construction_b(o.levels, o.cap);
  Output sink(o.out, "construction_b.csv", out);
  csv::Writer w(sink.stream());
  w.row({"stage", "x", "y", "parent"});
  for (const QuadPoint& q : b.points) {
    w.row({csv::format(std::uint64_t{q.stage}), csv::format(q.position.x), csv::format(q.position.y),
           csv::format(q.parent)});
  }
  if (!o.lineage_out.empty()) {
    Output lineage(o.lineage_out, "", out);
    csv::Writer lw(lineage.stream());
    lw.row({"index", "stage", "parent", "turn", "quarter", "host_x", "host_y"});
    for (std::size_t i = 0; i < b.points.size(); ++i) {
      const QuadPoint& q = b.points[i];
      lw.row({csv::format(std::uint64_t{i}), csv::format(std::uint64_t{q.stage}), csv::format(q.parent),
              csv::format(std::int64_t{q.turn}), csv::format(std::uint64_t{q.quarter}), csv::format(q.host_centre.x),
              csv::format(q.host_centre.y)});
    }
  }
  return kOk;
}

int cmd_dims(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<Point2> points = csv::read_points(o.points_in);
  const std::vector<double> scales = parse_scales(o.scales);
  const CoverReport report = cover_report(points, {}, scales, {o.origin_x, o.origin_y});
  Output sink(o.out, "dims.csv", out);
  csv::Writer w(sink.stream());
  w.row({"r", "N_r"});
  for (const CoverEntry& e : report.entries) w.row({csv::format(e.r), csv::format(e.count)});
  if (o.fit) err << "upper-fit slope " << csv::format(box_dimension_fit(report, FitMode::Upper)) << '\n';
  return kOk;
}

int cmd_coverage(const Options& o, std::ostream& out) {
  const std::vector<DipolePair> pairs = construction_pairs(o);
  Output sink(o.out, "coverage.csv", out);
  csv::Writer w(sink.stream());
  w.row({"pairs", "max_gap"});
  w.row({csv::format(std::uint64_t{pairs.size()}), csv::format(coverage_gap(pairs))});
  return kOk;
}

int cmd_suite(const Options& o, std::ostream& out) {
  const std::vector<DipolePair> pairs = construction_pairs(o);
  SuiteOptions so;
  so.with_cordoba = !o.no_cordoba;
  so.choice_seed = o.choice_seed;
  if (o.arc_domain) so.domain = {0.0, kPi / 10.0};
  Output sink(o.out, "suite.csv", out);
  csv::Writer w(sink.stream());
  w.row({"delta", "gamma", "n_net", "n_pairs", "n_cells", "n_good", "n_bad", "n_edges", "max_common_neighbour_ratio",
         "triples", "cordoba_ratio", "cell_exponent"});
  for (double delta : o.deltas) {
    for (double gamma : o.gammas) {
      const SuiteStats s = run_suite(pairs, delta, gamma, so);
      const auto n = [](std::size_t v) { return csv::format(std::uint64_t{v}); };
      w.row({csv::format(s.delta), csv::format(s.gamma), n(s.n_net), n(s.n_pairs), n(s.n_cells), n(s.n_good),
             n(s.n_bad), n(s.n_edges), csv::format(s.max_common_neighbour_ratio), csv::format(s.triples),
             std::isnan(s.cordoba_ratio) ? "nan" : csv::format(s.cordoba_ratio), csv::format(s.cell_exponent)});
    }
  }
  return kOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Output sink(o.out, "oracle.csv", out);
  csv::Writer w(sink.stream());
  w.row({"regime", "d", "delta", "survivors", "windows", "covered"});
  for (std::size_t i = 0; i < o.draws + o.tangent_draws; ++i) {
    const bool tangent = i >= o.draws;
    const double delta = std::pow(10.0, -6.0 + 3.0 * unit(rng));
    const double root = std::sqrt(delta);
    const double d = tangent ? 2.0 - root * unit(rng) : root + (2.0 - 2.0 * root) * unit(rng);
    const double phi = kTwoPi * unit(rng);
    const AnnuliResult r = annuli_cover_oracle({0.0, 0.0}, d * unit_vector(phi), delta);
    w.row({r.mode == AnnuliMode::OneWindow ? "one-window" : "two-window", csv::format(d), csv::format(delta),
           csv::format(std::uint64_t{r.survivors}), csv::format(std::uint64_t{r.windows.size()}),
           r.covered ? "1" : "0"});
  }
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  verify::Runner runner(verify::profile_named(o.profile));
  bool ok = true;
  runner.run_all([&](const verify::Result& r) {
    out << verify::format_line(r) << '\n' << std::flush;
    ok = ok && r.passed;
  });
  return ok ? kOk : kPropertyFailure;
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) fail(ErrorKind::InvalidArgument, "--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open config '" + path + "'");
  std::string line;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::InvalidArgument, "config: expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(ErrorKind::InvalidArgument, "config: empty key");
    if (has_flag(rest, key)) continue;
    if (value == "true") {
      extra.push_back("--" + key);
    } else if (value != "false") {
      extra.push_back("--" + key + "=" + value);
    }
  }
  rest.insert(rest.end(), extra.begin(), extra.end());
  return rest;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Dipole Kakeya constructions and discretized covering checks", "dipole-kakeya"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  app.add_option("--config", "key=value file; command-line flags win");

  auto* ca = app.add_subcommand("construct-a", "iterated arc transfer; writes stage,x,y");
  ca->add_option("--k-max", o.k_max, "stages to build")->check(CLI::Range(1, 6))->capture_default_str();
  add_schedule_options(ca, o.schedule);
  ca->add_option("--out", o.out, "points CSV (default stdout)");
  ca->add_option("--pairs", o.pairs_out, "generating pairs CSV");
  ca->add_option("--cap", o.cap, "point cap")->capture_default_str();

  auto* cb = app.add_subcommand("construct-b", "quadruple splitting; writes stage,x,y,parent");
  cb->add_option("--levels", o.levels, "splitting rounds")->check(CLI::Range(0, 12))->capture_default_str();
  cb->add_option("--out", o.out, "points CSV (default stdout)");
  cb->add_option("--lineage", o.lineage_out, "lineage CSV");
  cb->add_option("--cap", o.cap, "arc cap")->capture_default_str();

  auto* dims = app.add_subcommand("dims", "grid covering counts r,N_r of a point CSV");
  dims->add_option("--points", o.points_in, "CSV with x and y columns")->required();
  dims->add_option("--scales", o.scales, "auto-dyadic:FIRST:LAST or a comma list of r")->capture_default_str();
  dims->add_option("--origin-x", o.origin_x, "grid origin x");
  dims->add_option("--origin-y", o.origin_y, "grid origin y");
  dims->add_flag("--fit", o.fit, "print the upper-fit slope on stderr");
  dims->add_option("--out", o.out, "output CSV (default stdout)");

  auto add_source = [&](CLI::App* cmd) {
    cmd->add_option("--construction", o.construction, "a or b")
        ->check(CLI::IsMember({"a", "b"}))
        ->capture_default_str();
    cmd->add_option("--k-max", o.k_max, "construction A stages")->check(CLI::Range(1, 6))->capture_default_str();
    add_schedule_options(cmd, o.schedule);
    cmd->add_option("--levels", o.levels, "construction B rounds")->check(CLI::Range(0, 12))->capture_default_str();
    cmd->add_option("--rotated", o.rotated, "include the quarter-turn copy for construction B")->capture_default_str();
    cmd->add_option("--pairs", o.pairs_in, "CSV with x1,y1,x2,y2 instead of a construction");
    cmd->add_option("--cap", o.cap, "point cap")->capture_default_str();
    cmd->add_option("--out", o.out, "output CSV (default stdout)");
  };

  auto* cov = app.add_subcommand("coverage", "largest direction gap of dipole pairs");
  add_source(cov);

  auto* suite = app.add_subcommand("suite", "configuration statistics per (delta, gamma)");
  add_source(suite);
  suite->add_option("--deltas", o.deltas, "comma list of delta")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  suite->add_option("--gammas", o.gammas, "comma list of gamma in (0, 1/2)")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 0.5))
      ->capture_default_str();
  suite->add_flag("--no-cordoba", o.no_cordoba, "skip the maximal-operator ratio");
  suite->add_flag("--arc", o.arc_domain, "restrict the net to directions in [0, pi/10)");
  suite->add_option("--choice-seed", o.choice_seed, "0 = nearest pair; otherwise a random pair within 2 delta");

  auto* oracle = app.add_subcommand("oracle", "two-annuli covering oracle on random draws");
  oracle->add_option("--draws", o.draws, "two-window draws")->capture_default_str();
  oracle->add_option("--tangent-draws", o.tangent_draws, "near-tangent draws")->capture_default_str();
  oracle->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  oracle->add_option("--out", o.out, "output CSV (default stdout)");

  auto* va = app.add_subcommand("verify-all", "run every acceptance check");
  va->add_option("--profile", o.profile, "check profile")->check(CLI::IsMember({"desk"}))->capture_default_str();

  try {
    std::vector<std::string> expanded = expand_config(args);
    std::reverse(expanded.begin(), expanded.end());
    app.parse(std::move(expanded));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }

  for (double d : o.deltas) {
    if (!(d > 0.0 && d < 1.0)) {
      err << "error: --deltas entries must lie in (0, 1)\n";
      return kValidation;
    }
  }
  for (double g : o.gammas) {
    if (!(g > 0.0 && g < 0.5)) {
      err << "error: --gammas entries must lie in (0, 1/2)\n";
      return kValidation;
    }
  }

  try {
    if (*ca) return cmd_construct_a(o, out);
    if (*cb) return cmd_construct_b(o, out);
    if (*dims) return cmd_dims(o, out, err);
    if (*cov) return cmd_coverage(o, out);
    if (*suite) return cmd_suite(o, out);
    if (*oracle) return cmd_oracle(o, out);
    if (*va) return cmd_verify(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::ResourceCap ? kResourceCap : kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace dipole::cli
