#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dipole/cli.hpp"
#include "dipole/csv.hpp"
#include "dipole/quadruple.hpp"

namespace fs = std::filesystem;
using namespace dipole;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dipole_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("DIPOLE_OUT_DIR");
  }
  void TearDown() override {
    unsetenv("DIPOLE_OUT_DIR");
    fs::remove_all(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ConstructBWritesAllPoints) {
  const Outcome r = call({"construct-b", "--levels", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0], "stage,x,y,parent");
  EXPECT_EQ(rows.size(), 1u + 2 * (4096 - 1));
}

TEST_F(CliTest, LineageFile) {
  const Outcome r = call({"construct-b", "--levels", "3", "--out", path("b.csv"), "--lineage", path("lin.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(slurp(path("lin.csv")));
  EXPECT_EQ(rows[0], "index,stage,parent,turn,quarter,host_x,host_y");
  EXPECT_EQ(rows.size(), 1u + 2 * 63);
}

TEST_F(CliTest, PointsRoundTripBitExact) {
  ASSERT_EQ(call({"construct-b", "--levels", "5", "--out", path("b.csv")}).code, 0);
  const auto pts = csv::read_points(path("b.csv"));
  const ConstructionBState st = build_construction_b(5);
  ASSERT_EQ(pts.size(), st.points.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(pts[i].x, st.points[i].position.x);
    EXPECT_EQ(pts[i].y, st.points[i].position.y);
  }
}

TEST_F(CliTest, Deterministic) {
  const Outcome a = call({"construct-a", "--k-max", "2"});
  const Outcome b = call({"construct-a", "--k-max", "2"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(lines(a.out)[0], "stage,x,y");
}

TEST_F(CliTest, DimsAutoDyadic) {
  ASSERT_EQ(call({"construct-b", "--levels", "5", "--out", path("b.csv")}).code, 0);
  const Outcome r = call({"dims", "--points", path("b.csv"), "--scales", "auto-dyadic:5:12", "--fit"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[0], "r,N_r");
  EXPECT_NE(r.err.find("slope"), std::string::npos);
  const Outcome list = call({"dims", "--points", path("b.csv"), "--scales", "0.5,0.25,0.125"});
  ASSERT_EQ(list.code, 0) << list.err;
  EXPECT_EQ(lines(list.out).size(), 4u);
}

TEST_F(CliTest, ValidationErrors) {
  const Outcome unknown = call({"construct-b", "--bogus"});
  EXPECT_EQ(unknown.code, cli::kValidation);
  EXPECT_FALSE(unknown.err.empty());
  EXPECT_EQ(call({}).code, cli::kValidation);
  EXPECT_EQ(call({"no-such-command"}).code, cli::kValidation);
  EXPECT_EQ(call({"construct-b", "--levels", "13"}).code, cli::kValidation);
  EXPECT_EQ(call({"dims", "--points", path("missing.csv")}).code, cli::kValidation);
  EXPECT_EQ(call({"suite", "--deltas", "1.5"}).code, cli::kValidation);
  EXPECT_EQ(call({"suite", "--gammas", "0.5"}).code, cli::kValidation);
  EXPECT_EQ(call({"verify-all", "--profile", "huge"}).code, cli::kValidation);
  EXPECT_EQ(call({"--help"}).code, cli::kOk);
}

TEST_F(CliTest, ResourceCap) {
  EXPECT_EQ(call({"construct-b", "--levels", "12", "--cap", "1000"}).code, cli::kResourceCap);
  EXPECT_EQ(call({"construct-a", "--k-max", "4", "--cap", "1000"}).code, cli::kResourceCap);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  {
    std::ofstream cfg(path("run.cfg"));
    cfg << "# levels for the splitting run\nlevels = 3\nout=" << path("from_cfg.csv") << "\n";
  }
  ASSERT_EQ(call({"construct-b", "--config", path("run.cfg")}).code, 0);
  EXPECT_EQ(lines(slurp(path("from_cfg.csv"))).size(), 1u + 2 * 63);
  ASSERT_EQ(call({"construct-b", "--config=" + path("run.cfg"), "--levels", "2"}).code, 0);
  EXPECT_EQ(lines(slurp(path("from_cfg.csv"))).size(), 1u + 2 * 15);
  const auto expanded = cli::expand_config({"construct-b", "--config", path("run.cfg"), "--levels=2"});
  EXPECT_EQ(std::count(expanded.begin(), expanded.end(), "--levels=3"), 0);
}

TEST_F(CliTest, OutDirEnvironment) {
  setenv("DIPOLE_OUT_DIR", dir_.c_str(), 1);
  const Outcome r = call({"construct-b", "--levels", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(lines(slurp(dir_ / "construction_b.csv")).size(), 1u + 2 * 15);
}

TEST_F(CliTest, CoverageSuiteAndOracle) {
  const Outcome cov = call({"coverage", "--construction", "a", "--k-max", "3"});
  ASSERT_EQ(cov.code, 0) << cov.err;
  const auto cov_rows = lines(cov.out);
  ASSERT_EQ(cov_rows.size(), 2u);
  EXPECT_EQ(cov_rows[0], "pairs,max_gap");

  const Outcome suite = call({"suite", "--construction", "a", "--k-max", "3", "--deltas", "0.0078125,0.00390625",
                              "--gammas", "0.25", "--no-cordoba"});
  ASSERT_EQ(suite.code, 0) << suite.err;
  const auto suite_rows = lines(suite.out);
  ASSERT_EQ(suite_rows.size(), 3u);
  EXPECT_EQ(suite_rows[0].rfind("delta,gamma,n_net,", 0), 0u);

  const Outcome oracle = call({"oracle", "--draws", "4", "--tangent-draws", "2", "--seed", "5"});
  ASSERT_EQ(oracle.code, 0) << oracle.err;
  const auto oracle_rows = lines(oracle.out);
  ASSERT_EQ(oracle_rows.size(), 7u);
  EXPECT_EQ(oracle_rows[0], "regime,d,delta,survivors,windows,covered");
  for (std::size_t i = 1; i < oracle_rows.size(); ++i) EXPECT_EQ(oracle_rows[i].back(), '1');
}

TEST_F(CliTest, BinaryExitCodes) {
  const char* exe = std::getenv("DIPOLE_CLI");
  if (exe == nullptr) GTEST_SKIP() << "DIPOLE_CLI not set";
  const std::string quiet = " >" + path("stdout.txt") + " 2>" + path("stderr.txt");
  EXPECT_EQ(WEXITSTATUS(std::system((std::string(exe) + " construct-b --levels 2" + quiet).c_str())), 0);
  EXPECT_EQ(lines(slurp(path("stdout.txt"))).size(), 1u + 2 * 15);
  EXPECT_EQ(WEXITSTATUS(std::system((std::string(exe) + " construct-b --bogus" + quiet).c_str())), 1);
  EXPECT_EQ(WEXITSTATUS(std::system((std::string(exe) + " construct-b --levels 12 --cap 10" + quiet).c_str())), 3);
}
