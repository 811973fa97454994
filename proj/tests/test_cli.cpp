#include <gtest/gtest.h>

#include <cmath>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(COMBDIM_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("combdim_cli_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("nonsense").code, 2);
  EXPECT_EQ(run("bound --p 2.5").code, 2);
  EXPECT_EQ(run("estimate-c --p 1.5 --lambda 0.3333333333333333").code, 2);
  EXPECT_EQ(run("cantor --format xml").code, 2);
  EXPECT_EQ(run("integral --points -0.5 0 2 0").code, 2);
  EXPECT_EQ(run("detect --center -0.5 0.2").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, ConfigFileUnknownKeyExitsTwo) {
  const fs::path d = scratch("cfg");
  fs::create_directories(d);
  std::ofstream(d / "bad.json") << R"({"lambda": 0.3, "bogus": 1})";
  EXPECT_EQ(run("bound --config " + (d / "bad.json").string()).code, 2);
}

TEST(Cli, ConfigMergesWithFlagsWinning) {
  const fs::path d = scratch("merge");
  fs::create_directories(d);
  std::ofstream(d / "c.json") << R"({"p": 1.1, "c-const": 4})";
  const CliRun r = run("bound --config " + (d / "c.json").string() + " --p 1.3");
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["config"]["p"].get<double>(), 1.3);
  EXPECT_EQ(j["config"]["c-const"].get<double>(), 4.0);
}

TEST(Cli, CantorJsonAndCsv) {
  const CliRun j = run("cantor --lambda 0.25 --depth 3 --x 0.5");
  ASSERT_EQ(j.code, 0);
  const auto doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc["distance"]["value"].get<double>(), 0.25);
  const CliRun c = run("cantor --lambda 0.25 --depth 2 --format csv");
  EXPECT_EQ(c.out.substr(0, 27), "level,index,kind,left,right");
}

TEST(Cli, IntegralOutsideSegment) {
  const CliRun r = run("integral --p 1.5 --points 2 0 3 0");
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  // two 45 degree pieces with dist = x - 1: sqrt2 * int_1^2 u^(-1/2) du
  EXPECT_NEAR(doc["integral"].get<double>(), 4.0 - 2.0 * std::sqrt(2.0), 1e-9);
  EXPECT_EQ(doc["case"], "i");
}

TEST(Cli, CombRenderWritesSvgAndCsv) {
  const fs::path d = scratch("render");
  ASSERT_EQ(run("comb render --depth 5 --out " + d.string()).code, 0);
  EXPECT_NE(slurp(d / "domain.svg").find("viewBox=\"-1.1 -1.1 2.2 2.2\""), std::string::npos);
  EXPECT_EQ(slurp(d / "boundary.csv").substr(0, 4), "x,y\n");
}

TEST(Cli, SharpnessExitCodes) {
  EXPECT_EQ(run("sharpness --p 1.5").code, 0);
  EXPECT_EQ(run("sharpness --p 1.5 --coefficient 1.2984255368000672").code, 1);
}

TEST(Cli, DimBoxAndNet) {
  const CliRun b = run("dim box --depth 8");
  ASSERT_EQ(b.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(b.out)["box"]["value"].get<double>(), 0.6309, 0.03);
  const fs::path d = scratch("dim");
  ASSERT_EQ(run("dim net --depth 8 --out " + d.string()).code, 0);
  EXPECT_EQ(slurp(d / "nets.csv").substr(0, 18), "i,k,j_witness,N_j\n");
}

TEST(Cli, DetectSinglePoint) {
  const CliRun r = run("detect --center 0.3333333333333333 0 --resolution 256");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["certificates"][0]["verdict"], "two_sided");
}

TEST(Cli, ExperimentArtifactsDeterministic) {
  const std::string args = "experiment --config " + std::string(COMBDIM_SAMPLES) +
                           "/experiment.json --pairs 200 --resolution 256 --corpus-level 3 --out ";
  const fs::path a = scratch("exp_a");
  const fs::path b = scratch("exp_b");
  ASSERT_EQ(run(args + a.string()).code, 0);
  ASSERT_EQ(run(args + b.string() + " --workers 1").code, 0);
  for (const char* f : {"report.json", "pairs.csv", "boxcounts.csv", "nets.csv", "domain.svg"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  EXPECT_EQ(slurp(a / "pairs.csv").substr(0, 32), "x1,y1,x2,y2,integral,ratio,case\n");
}
