#include "cli_runner.hpp"
#include "temp_dir.hpp"
#include "threshnet/config.hpp"
#include "threshnet/io.hpp"

#include <gtest/gtest.h>

using namespace threshnet;
using namespace threshnet::testing;

namespace {

const std::string kCli = THRESHNET_CLI;
const std::string kData = THRESHNET_TEST_DATA;

}  // namespace

class CliDeterminism : public ::testing::TestWithParam<CliCase> {};

TEST_P(CliDeterminism, TwoRunsAreByteIdentical) {
  TempDir dir;
  const auto& c = GetParam();
  const auto a = dir.file("a"), b = dir.file("b");
  ASSERT_EQ(run_cli(kCli, "--out " + a + " " + c.args), 0) << c.args;
  ASSERT_EQ(run_cli(kCli, "--out " + b + " " + c.args), 0) << c.args;
  const auto sa = snapshot(a), sb = snapshot(b);
  ASSERT_TRUE(sa.count("manifest.json"));
  EXPECT_GE(sa.size(), 2u);
  EXPECT_EQ(sa, sb);
}

INSTANTIATE_TEST_SUITE_P(AllSubcommands, CliDeterminism, ::testing::ValuesIn(determinism_cases(kData)),
                         [](const auto& info) {
                           std::string s = info.param.name;
                           std::replace(s.begin(), s.end(), '-', '_');
                           return s;
                         });

TEST(Cli, GenerateSeedsDiffer) {
  TempDir dir;
  ASSERT_EQ(run_cli(kCli, "--seed 7 --out " + dir.file("a") + " generate --n 20"), 0);
  ASSERT_EQ(run_cli(kCli, "--seed 8 --out " + dir.file("b") + " generate --n 20"), 0);
  EXPECT_NE(slurp(dir.file("a") + "/graph.csv"), slurp(dir.file("b") + "/graph.csv"));
}

TEST(Cli, GeneratedGraphReloadsToSameSample) {
  TempDir dir;
  ASSERT_EQ(run_cli(kCli, "--seed 21 --out " + dir.file("g") + " generate --n 25 --family Poisson --directed"), 0);
  GenConfig c;
  c.n = 25;
  c.family = Family::Poisson;
  c.directed = true;
  c.seed = 21;
  const auto g = load_edgelist(dir.file("g") + "/graph.csv");
  EXPECT_TRUE(g == sample_graph(c));
  EXPECT_EQ(g.unit_label(), "counts");
}

TEST(Cli, ManifestReplaysRun) {
  TempDir dir;
  ASSERT_EQ(run_cli(kCli, "--seed 12 --out " + dir.file("a") + " sweep --n 12 --replicates 2 --densities 1,3"), 0);
  const auto manifest = load_json(dir.file("a") + "/manifest.json");
  EXPECT_EQ(manifest.at("tool"), "threshnet");
  EXPECT_EQ(manifest.at("version"), kVersion);
  EXPECT_EQ(manifest.at("subcommand"), "sweep");
  EXPECT_EQ(manifest.at("seed"), 12);
  // Feeding the resolved config back reproduces the tables.
  std::ofstream(dir.file("cfg.json")) << manifest.at("config").dump();
  ASSERT_EQ(run_cli(kCli, "--seed 12 --config " + dir.file("cfg.json") + " --out " + dir.file("b") + " sweep"), 0);
  EXPECT_EQ(snapshot(dir.file("a")), snapshot(dir.file("b")));
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  TempDir dir;
  const std::string args = " sweep --n 14 --replicates 4 --geometric 0.5,6,4";
  ASSERT_EQ(run_cli(kCli, "--seed 2 --threads 1 --out " + dir.file("a") + args), 0);
  ASSERT_EQ(run_cli(kCli, "--seed 2 --threads 3 --out " + dir.file("b") + args), 0);
  EXPECT_EQ(snapshot(dir.file("a")), snapshot(dir.file("b")));
}

TEST(Cli, SweepRowCount) {
  TempDir dir;
  ASSERT_EQ(run_cli(kCli, "--out " + dir.file("a") + " sweep --n 12 --replicates 10 --geometric 0.5,5.5,30"), 0);
  const auto text = slurp(dir.file("a") + "/results.csv");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 30 * 10 * 7);
}

TEST(Cli, AnalyzeNewcombGivesRowPerWeekAndStatistic) {
  TempDir dir;
  std::string inputs;
  for (int w = 1; w <= 15; ++w) {
    char name[64];
    std::snprintf(name, sizeof name, "/newcomb/week_%02d.txt", w);
    inputs += " " + kData + name;
  }
  ASSERT_EQ(run_cli(kCli, "--out " + dir.file("a") + " analyze --format rank --geometric 0.5,8,5" + inputs), 0);
  const auto text = slurp(dir.file("a") + "/optima.csv");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 15 * 7);
  EXPECT_NE(text.find("week_15,ohmic_diameter"), std::string::npos);
}

TEST(Cli, UsageErrorsExitNonzero) {
  TempDir dir;
  const auto log = dir.file("log");
  EXPECT_NE(run_cli(kCli, "frobnicate", log), 0);
  EXPECT_NE(slurp(log).find("Usage"), std::string::npos);
  EXPECT_NE(run_cli(kCli, "sweep --no-such-flag", log), 0);
  EXPECT_NE(slurp(log).find("Usage"), std::string::npos);
  EXPECT_NE(run_cli(kCli, "", log), 0);
  EXPECT_NE(run_cli(kCli, "analyze", log), 0);
}

TEST(Cli, ComputationalErrorsSurfaceWithLocation) {
  TempDir dir;
  const auto bad = dir.write("bad.csv", "0,1,1\n0,1\n");
  const auto log = dir.file("log");
  EXPECT_EQ(run_cli(kCli, "--out " + dir.file("o") + " analyze " + bad, log), 2);
  EXPECT_NE(slurp(log).find("bad.csv:2"), std::string::npos) << slurp(log);
  const auto cfg = dir.write("cfg.json", R"({"n": 10, "sigmaalpha": 1})");
  EXPECT_EQ(run_cli(kCli, "--config " + cfg + " --out " + dir.file("o") + " generate", log), 2);
  EXPECT_NE(slurp(log).find("sigmaalpha"), std::string::npos);
}
