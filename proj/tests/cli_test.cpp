#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "teflow/report.hpp"
#include "teflow/run_config.hpp"

namespace teflow::cli {
namespace {

namespace fs = std::filesystem;

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
           ("teflow_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  void synth_cas(const fs::path& where, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"synth", "--kind", "cas", "--seed", "4", "--out", where.string(),
                                  "--windows-per-segment", "2"};
    args.insert(args.end(), extra.begin(), extra.end());
    ASSERT_EQ(run(args), kExitOk) << err_.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, AnalyzeWritesOutputs) {
  synth_cas(dir_ / "data");
  ASSERT_EQ(run({"analyze", "--input", (dir_ / "data/data.csv").string(), "--config",
                 (dir_ / "data/config.json").string(), "--out", (dir_ / "results").string(),
                 "--max-lag", "8", "--dump-lags", "--threads", "1"}),
            kExitOk)
      << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "results/teflow.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "results/plot.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "results/report.json"));

  std::ifstream csv(dir_ / "results/teflow.csv");
  const TeFlowResult r = read_teflow_csv(csv);
  EXPECT_EQ(r.windows.size(), 4U);
  EXPECT_EQ(r.subsystems, (std::vector<std::string>{"comp1", "comp2"}));

  const auto report = nlohmann::json::parse(slurp(dir_ / "results/report.json"));
  EXPECT_EQ(report["effective_config"]["lags"]["max_lag"], 8);
  EXPECT_EQ(report["config"], nlohmann::json::parse(slurp(dir_ / "data/config.json")));
  EXPECT_EQ(report["config_fnv1a64"], fnv1a64_hex(canonical_json(slurp(dir_ / "data/config.json"))));
  EXPECT_EQ(report["windows"][0]["cells"][0]["lag_te"].size(), 8U);
}

TEST_F(CliTest, AnalyzeIsByteReproducible) {
  synth_cas(dir_ / "data");
  for (const char* out : {"a", "b"}) {
    ASSERT_EQ(run({"analyze", "--input", (dir_ / "data/data.csv").string(), "--config",
                   (dir_ / "data/config.json").string(), "--out", (dir_ / out).string(),
                   "--max-lag", "6"}),
              kExitOk);
  }
  EXPECT_EQ(slurp(dir_ / "a/teflow.csv"), slurp(dir_ / "b/teflow.csv"));
  EXPECT_EQ(slurp(dir_ / "a/plot.csv"), slurp(dir_ / "b/plot.csv"));
}

TEST_F(CliTest, MaxLagNotBelowWindowIsConfigError) {
  synth_cas(dir_ / "data");
  EXPECT_EQ(run({"analyze", "--input", (dir_ / "data/data.csv").string(), "--config",
                 (dir_ / "data/config.json").string(), "--out", (dir_ / "r").string(),
                 "--max-lag", "180"}),
            kExitConfigError);
  EXPECT_NE(err_.str().find("teflow: error[config]:"), std::string::npos);
  EXPECT_NE(err_.str().find("max_lag + k + 2"), std::string::npos);
}

TEST_F(CliTest, MissingColumnIsDataError) {
  synth_cas(dir_ / "data");
  auto cfg = parse_run_config(slurp(dir_ / "data/config.json"));
  cfg.columns.flow = "outlet_flow";
  std::ofstream(dir_ / "bad.json") << to_json(cfg);
  EXPECT_EQ(run({"analyze", "--input", (dir_ / "data/data.csv").string(), "--config",
                 (dir_ / "bad.json").string(), "--out", (dir_ / "r").string()}),
            kExitDataError);
  EXPECT_NE(err_.str().find("teflow: error[data]:"), std::string::npos);
  EXPECT_NE(err_.str().find("outlet_flow"), std::string::npos);
}

TEST_F(CliTest, TePrintsSingleValue) {
  synth_cas(dir_ / "data");
  ASSERT_EQ(run({"te", "--input", (dir_ / "data/data.csv").string(), "--source", "comp1_current",
                 "--target", "efficiency", "--lag", "3", "--config",
                 (dir_ / "data/config.json").string()}),
            kExitOk)
      << err_.str();
  const double te_driver = std::stod(out_.str());
  ASSERT_EQ(run({"te", "--input", (dir_ / "data/data.csv").string(), "--source", "comp1_current",
                 "--target", "efficiency", "--lag", "20", "--config",
                 (dir_ / "data/config.json").string()}),
            kExitOk);
  EXPECT_GT(te_driver, std::stod(out_.str()) + 0.1);  // comp1 drives the first segment at lag 3

  ASSERT_EQ(run({"te", "--input", (dir_ / "data/data.csv").string(), "--source", "comp1_current",
                 "--target", "flow", "--lag", "12"}),
            kExitOk);
  EXPECT_NO_THROW((void)std::stod(out_.str()));

  EXPECT_EQ(run({"te", "--input", (dir_ / "data/data.csv").string(), "--source", "comp1_current",
                 "--target", "efficiency"}),
            kExitConfigError);
}

TEST_F(CliTest, CeOnGaussianData) {
  ASSERT_EQ(run({"synth", "--kind", "gaussian", "--rho", "0.9", "--samples", "1000", "--out",
                 (dir_ / "g").string()}),
            kExitOk);
  const auto truth = nlohmann::json::parse(slurp(dir_ / "g/truth.json"));
  EXPECT_NEAR(truth["oracle_mi"].get<double>(), 0.830366, 1e-6);
  ASSERT_EQ(run({"ce", "--input", (dir_ / "g/data.csv").string(), "--columns", "x1,x2"}), kExitOk)
      << err_.str();
  EXPECT_NEAR(std::stod(out_.str()), -0.830366, 0.2);
  ASSERT_EQ(run({"ce", "--input", (dir_ / "g/data.csv").string(), "--columns", "x1"}), kExitOk);
  EXPECT_EQ(std::stod(out_.str()), 0.0);
}

TEST_F(CliTest, SynthIsDeterministicAndWritesTruth) {
  synth_cas(dir_ / "s1", {"--subsystems", "3", "--constant", "2"});
  synth_cas(dir_ / "s2", {"--subsystems", "3", "--constant", "2"});
  EXPECT_EQ(slurp(dir_ / "s1/data.csv"), slurp(dir_ / "s2/data.csv"));
  const auto truth = nlohmann::json::parse(slurp(dir_ / "s1/truth.json"));
  EXPECT_EQ(truth["windows"].size(), 4U);
  EXPECT_EQ(truth["windows"][0]["driver"], "comp1");
  EXPECT_EQ(truth["windows"][2]["driver"], "comp2");
  EXPECT_EQ(truth["constant_subsystems"][0], "comp3");

  ASSERT_EQ(run({"synth", "--kind", "var", "--samples", "300", "--lags", "2", "--out",
                 (dir_ / "v").string()}),
            kExitOk);
  EXPECT_TRUE(nlohmann::json::parse(slurp(dir_ / "v/truth.json")).contains("oracle_linear_te"));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}), kExitConfigError);
  EXPECT_EQ(run({"analyze", "--input", "x.csv"}), kExitConfigError);
  EXPECT_EQ(run({"frobnicate"}), kExitConfigError);
  EXPECT_EQ(run({"--help"}), kExitOk);
  EXPECT_NE(out_.str().find("analyze"), std::string::npos);
  EXPECT_EQ(run({"te", "--input", (dir_ / "nope.csv").string(), "--source", "a", "--target", "b"}),
            kExitDataError);
}

}  // namespace
}  // namespace teflow::cli
