#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;
const fs::path kScenarios = MLAB_SCENARIO_DIR;

struct Output {
  int code = -1;
  std::string text;
};

Output cli(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / ("mlab_cli_" + std::to_string(::getpid()) + ".log");
  const std::string cmd = std::string("\"") + MLAB_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  Output out;
  out.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  out.text = ss.str();
  fs::remove(log);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mlab_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string config(const char* name) const { return "--config \"" + (kScenarios / name).string() + "\""; }
  std::string out(const std::string& sub) const { return "--out \"" + (dir_ / sub).string() + "\""; }
  fs::path dir_;
};

TEST_F(Cli, RunWritesOneReportPerCheck) {
  const auto r = cli("run " + config("unit_sphere_identities.json") + " " + out("a"));
  ASSERT_EQ(r.code, 0) << r.text;
  int reports = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "a"))
    if (e.path().extension() == ".json" && e.path().filename() != "metadata.json") ++reports;
  EXPECT_EQ(reports, 12);
  EXPECT_TRUE(fs::exists(dir_ / "a" / "reports.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "metadata.json"));
  EXPECT_NE(slurp(dir_ / "a" / "01_hm_identity.json").find("\"schema\": \"minkowski-lab/1\""),
            std::string::npos);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(cli("run " + config("peanut_chain.json") + " " + out("p")).code, 2);
  EXPECT_EQ(cli("run " + config("mixed_verdicts.json") + " " + out("m")).code, 1);
  const auto bad = cli("run " + config("malformed.json") + " " + out("x"));
  EXPECT_EQ(bad.code, 64);
  EXPECT_FALSE(fs::exists(dir_ / "x"));
  const auto schema = cli("run " + config("bad_schema.json") + " " + out("y"));
  EXPECT_EQ(schema.code, 64);
  EXPECT_NE(schema.text.find("/checks/1/parameters/k"), std::string::npos) << schema.text;
  EXPECT_EQ(cli("run --config /nonexistent.json " + out("z")).code, 64);
}

TEST_F(Cli, UsageErrors) {
  const auto unknown = cli("frobnicate");
  EXPECT_EQ(unknown.code, 64);
  EXPECT_NE(unknown.text.find("Usage"), std::string::npos);
  EXPECT_EQ(cli("run").code, 64);
  EXPECT_EQ(cli("run " + config("unit_sphere_identities.json") + " --threads 0").code, 64);
  EXPECT_EQ(cli("run " + config("unit_sphere_identities.json") + " --tol-scale -1").code, 64);
  EXPECT_EQ(cli("").code, 64);
}

TEST_F(Cli, Registries) {
  const auto s = cli("list-surfaces");
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(s.text.find("product_torus_R4"), std::string::npos);
  const auto c = cli("list-checks");
  EXPECT_EQ(c.code, 0);
  EXPECT_NE(c.text.find("steklov"), std::string::npos);
}

TEST_F(Cli, ReportsAreByteIdenticalAcrossThreadCounts) {
  ASSERT_EQ(cli("run " + config("unit_sphere_identities.json") + " " + out("t1") + " --threads 1").code, 0);
  ASSERT_EQ(cli("run " + config("unit_sphere_identities.json") + " " + out("t4") + " --threads 4").code, 0);
  ASSERT_EQ(cli("run " + config("unit_sphere_identities.json") + " " + out("t4b") + " --threads 4").code, 0);
  for (const auto& e : fs::directory_iterator(dir_ / "t1")) {
    const auto name = e.path().filename();
    if (name == "metadata.json") continue;
    EXPECT_EQ(slurp(e.path()), slurp(dir_ / "t4" / name)) << name;
    EXPECT_EQ(slurp(e.path()), slurp(dir_ / "t4b" / name)) << name;
  }
}

// Column `name` of a CSV file, as doubles.
std::vector<double> column(const fs::path& csv, const std::string& name) {
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) header.push_back(cell);
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return {};
  const auto idx = static_cast<std::size_t>(it - header.begin());
  std::vector<double> values;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::vector<std::string> cells;
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    values.push_back(std::stod(cells.at(idx)));
  }
  return values;
}

TEST_F(Cli, EpsilonSweepHasMonotoneDefects) {
  const auto r = cli("sweep " + config("perturbed_probe.json") + " " + out("s") +
                     " --axis /surface/params/eps --values 0.01,0.02,0.05,0.1");
  ASSERT_EQ(r.code, 0) << r.text;
  for (const char* col : {"hypothesis_defect", "umbilicity_defect"}) {
    const auto v = column(dir_ / "s" / "sweep.csv", col);
    ASSERT_EQ(v.size(), 4u) << col;
    for (std::size_t i = 1; i < v.size(); ++i) EXPECT_GT(v[i], v[i - 1]) << col;
  }
  EXPECT_TRUE(fs::exists(dir_ / "s" / "value_01" / "01_rigidity_probe.json"));
}

TEST_F(Cli, ResolutionSweepDecreases) {
  const auto r = cli("sweep " + config("ellipsoid_resolution.json") + " " + out("q") +
                     " --axis /quadrature/interval_nodes --values 4,8,16");
  ASSERT_EQ(r.code, 1) << r.text;  // the coarsest grids fail the tolerance
  const auto v = column(dir_ / "q" / "sweep.csv", "relative_residual");
  ASSERT_EQ(v.size(), 3u);
  EXPECT_GT(v[0], v[1]);
  EXPECT_GT(v[1], v[2]);
}

TEST_F(Cli, HyperbolicChainSlackStaysAtZero) {
  const auto r = cli("sweep " + config("hyperbolic_chain.json") + " " + out("h") +
                     " --axis /surface/params/r0 --values 0.5,1,1.5,2");
  ASSERT_EQ(r.code, 0) << r.text;
  const auto v = column(dir_ / "h" / "sweep.csv", "min_slack");
  ASSERT_EQ(v.size(), 8u);
  for (double s : v) EXPECT_LT(std::abs(s), 1e-9);
}

TEST_F(Cli, SweepAxisMustBeNumeric) {
  EXPECT_EQ(cli("sweep " + config("perturbed_probe.json") + " " + out("e") +
                " --axis /surface/label --values 1,2").code,
            64);
  EXPECT_EQ(cli("sweep " + config("perturbed_probe.json") + " " + out("e") +
                " --axis /surface/params/eps --values 0.1,abc").code,
            64);
  EXPECT_EQ(cli("sweep " + config("perturbed_probe.json") + " " + out("e") +
                " --axis /nothing/here --values 1").code,
            64);
}

}  // namespace
