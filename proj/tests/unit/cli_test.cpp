#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "frtsim/timeseries.hpp"
#include "frtsim_cli/cli.hpp"

using namespace frtsim;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("frtsim_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Cli, ShortRunWithoutFault) {
  const fs::path dir = scratch("run");
  const Invocation r = invoke({"run", "--preset", "paper", "--out", dir.string(), "--set", "sim.t_end=0.1", "--set",
                               "fault.enabled=false"});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  const TimeSeries ts = read_csv(dir / "paper.csv");
  EXPECT_EQ(ts.size(), 101u);
  for (double v : ts.column("v_pcc")) EXPECT_NEAR(v, 1.0, 0.02);
  EXPECT_TRUE(fs::exists(dir / "paper.report.json"));
}

TEST(Cli, CheckRejectsTraceBelowFloor) {
  const fs::path dir = scratch("check");
  TimeSeries ts({{"time", "s"}, {"v_pcc", "pu"}});
  for (int k = 0; k <= 200; ++k) {
    const double t = k / 100.0;
    ts.append(std::vector<double>{t, t >= 0.8 && t < 0.95 ? 0.10 : 1.0});
  }
  write_csv(ts, dir / "trace.csv");
  const Invocation r = invoke({"check", "--trace", (dir / "trace.csv").string()});
  EXPECT_EQ(r.code, cli::kFailed);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("region 2"), std::string::npos);
}

TEST(Cli, CheckAcceptsCleanTrace) {
  const fs::path dir = scratch("check_ok");
  TimeSeries ts({{"time", "s"}, {"v_pcc", "pu"}});
  for (int k = 0; k <= 200; ++k) ts.append(std::vector<double>{k / 100.0, 1.0});
  write_csv(ts, dir / "trace.csv");
  EXPECT_EQ(invoke({"check", "--trace", (dir / "trace.csv").string()}).code, cli::kOk);
}

TEST(Cli, ConfigErrorsAreUsageErrors) {
  const Invocation bad = invoke({"config", "--set", "scig.r_s=-1"});
  EXPECT_EQ(bad.code, cli::kUsage);
  EXPECT_NE(bad.err.find("scig.r_s"), std::string::npos);
  EXPECT_EQ(invoke({"run", "--config", "/nonexistent.scenario"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(invoke({}).code, cli::kUsage);
}

TEST(Cli, ConfigPrintsResolvedTree) {
  const Invocation r = invoke({"config", "--set", "sim.t_end=0.5"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(serialize_config(parse_config_text(r.out)), r.out);
  EXPECT_EQ(parse_config_text(r.out).scenario.sim.t_end, 0.5);
}

TEST(Cli, ComparePairDiffersOnlyInStatcom) {
  const auto [with, without] = cli::compare_pair(default_config());
  EXPECT_TRUE(with.scenario.statcom_enabled);
  EXPECT_FALSE(without.scenario.statcom_enabled);
  EXPECT_NE(with.scenario.name, without.scenario.name);
}

TEST(Cli, SweepWritesOneRowPerPoint) {
  const fs::path dir = scratch("sweep");
  const Invocation r = invoke({"sweep", "--out", dir.string(), "--set", "sim.t_end=0.05", "--set",
                               "fault.enabled=false", "--grid", "network.fault_resistance=1,2,3"});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  std::ifstream in(dir / "paper_sweep.csv");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 4);
}
