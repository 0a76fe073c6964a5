#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "cli.hpp"

namespace fs = std::filesystem;
using nexus::cli::run_cli;

namespace {

const fs::path kData = NEXUS_DATA_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("nexus_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ShippedBundlesValidate) {
  for (const char* name : {"gas10", "tight_gas", "security_small", "desk30", "uk_skeleton"}) {
    EXPECT_EQ(run_cli({"nexus", "validate", "--scenario", (kData / name).string()}), nexus::cli::kExitClean) << name;
  }
}

TEST_F(Cli, BrokenBundleReportsFindings) {
  const auto bad = dir_ / "bad";
  fs::copy(kData / "gas10", bad);
  auto snap = nlohmann::json::parse(slurp(bad / "load_snapshot.json"));
  snap["shares"]["B1"] = 0.4;
  std::ofstream(bad / "load_snapshot.json") << snap.dump();
  EXPECT_EQ(run_cli({"nexus", "validate", "--scenario", bad.string()}), nexus::cli::kExitFindings);
  // Studies refuse to run on a bundle that does not validate.
  EXPECT_EQ(run_cli({"nexus", "adequacy", "--scenario", bad.string(), "--out", (dir_ / "o").string()}),
            nexus::cli::kExitFindings);
  EXPECT_FALSE(fs::exists(dir_ / "o" / "summary.json"));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({"nexus"}), nexus::cli::kExitUsage);
  EXPECT_EQ(run_cli({"nexus", "adequacy", "--scenario", (kData / "gas10").string()}), nexus::cli::kExitUsage);
}

TEST_F(Cli, AdequacyRerunIsByteIdentical) {
  const auto scen = (kData / "tight_gas").string();
  for (const char* out : {"a", "b"}) {
    ASSERT_EQ(run_cli({"nexus", "adequacy", "--scenario", scen, "--out", (dir_ / out).string(), "--omit-timing"}),
              nexus::cli::kExitClean);
  }
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "a")) {
    ++files;
    EXPECT_EQ(slurp(e.path()), slurp(dir_ / "b" / e.path().filename())) << e.path().filename();
  }
  EXPECT_GE(files, 9u);

  const auto summary = nlohmann::json::parse(slurp(dir_ / "a" / "summary.json"));
  EXPECT_TRUE(summary["converged"].get<bool>());
  EXPECT_GT(summary["gas_curtailed_kg"].get<double>(), 0.0);
  EXPECT_EQ(summary["shed_MWh"].get<double>(), 0.0);
  EXPECT_FALSE(summary.contains("wall_s"));

  // The manifest hashes every output except itself.
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "a" / "manifest.json"));
  std::size_t hashed = 0;
  for (const auto& o : manifest["outputs"]) {
    const auto name = o["path"].get<std::string>();
    EXPECT_NE(name, "manifest.json");
    EXPECT_EQ(o["sha256"].get<std::string>(), nexus::cli::sha256_file(dir_ / "a" / name)) << name;
    ++hashed;
  }
  EXPECT_EQ(hashed, files - 1);
}

TEST_F(Cli, SecurityWorkerCountDoesNotChangeReport) {
  const auto scen = (kData / "security_small").string();
  for (const char* jobs : {"1", "3"}) {
    ASSERT_EQ(run_cli({"nexus", "security", "--scenario", scen, "--out", (dir_ / jobs).string(), "--jobs", jobs,
                       "--omit-timing"}),
              nexus::cli::kExitClean);
  }
  const auto a = slurp(dir_ / "1" / "contingency_report.csv");
  EXPECT_EQ(a, slurp(dir_ / "3" / "contingency_report.csv"));
  EXPECT_EQ(slurp(dir_ / "1" / "summary.json"), slurp(dir_ / "3" / "summary.json"));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 22);  // header plus 21 contingencies
  EXPECT_EQ(a.find("wall_s"), std::string::npos);
}

TEST_F(Cli, SecuritySelectionFile) {
  const auto sel = dir_ / "sel.json";
  std::ofstream(sel) << R"({"lines": ["L8"], "plants": false, "solar": false, "wind": ["W2"], "compressors": false})";
  ASSERT_EQ(run_cli({"nexus", "security", "--scenario", (kData / "security_small").string(), "--out",
                     (dir_ / "o").string(), "--contingencies", sel.string()}),
            nexus::cli::kExitClean);
  const auto csv = slurp(dir_ / "o" / "contingency_report.csv");
  EXPECT_NE(csv.find("\nline:L8,"), std::string::npos);
  EXPECT_NE(csv.find("\nwind:W2,"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_NE(csv.find(",wall_s"), std::string::npos);
}

TEST_F(Cli, GasSimConservesMass) {
  ASSERT_EQ(run_cli({"nexus", "gas-sim", "--scenario", (kData / "gas10").string(), "--out", (dir_ / "o").string(),
                     "--with-dispatch"}),
            nexus::cli::kExitClean);
  const auto s = nlohmann::json::parse(slurp(dir_ / "o" / "summary.json"));
  EXPECT_LT(std::abs(s["mass_balance_error_kg"].get<double>()), 1e-4 * s["injected_kg"].get<double>());
  // 24 h at dt = 60 s, one row per step after the initial state.
  const auto lp = slurp(dir_ / "o" / "linepack.csv");
  EXPECT_EQ(std::count(lp.begin(), lp.end(), '\n'), 1 + 1440);
}
