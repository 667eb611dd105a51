#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using proswap::cli::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string Field(const std::string& text, const std::string& key) {
  const std::string haystack = "\n" + text;
  const auto pos = haystack.find("\n" + key + "=");
  if (pos == std::string::npos) return "";
  const auto start = pos + key.size() + 2;
  return haystack.substr(start, haystack.find('\n', start) - start);
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("proswap-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    unsetenv("PROSWAP_SEED");
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, RunIsDeterministicPerSeed) {
  const Result a = Cli({"run", "--ell", "8", "--nu", "256", "--seed", "7"});
  const Result b = Cli({"run", "--ell", "8", "--nu", "256", "--seed", "7"});
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(Field(a.out, "seed"), "7");
  EXPECT_EQ(Field(a.out, "dealer_paid"), "1");
  const Result c = Cli({"run", "--ell", "8", "--nu", "256", "--seed", "8"});
  EXPECT_NE(a.out, c.out);
}

TEST_F(CliTest, SeedFallsBackToEnvironment) {
  setenv("PROSWAP_SEED", "7", 1);
  const Result env = Cli({"run", "--ell", "2"});
  unsetenv("PROSWAP_SEED");
  EXPECT_EQ(env.out, Cli({"run", "--ell", "2", "--seed", "7"}).out);
  setenv("PROSWAP_SEED", "seven", 1);
  EXPECT_EQ(Cli({"run"}).code, 1);
  unsetenv("PROSWAP_SEED");
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Cli({}).code, 1);
  EXPECT_EQ(Cli({"frobnicate"}).code, 1);
  EXPECT_EQ(Cli({"run", "--ell", "17"}).code, 1);
  EXPECT_EQ(Cli({"run", "--lambda", "3"}).code, 1);
  EXPECT_EQ(Cli({"run", "--t-p", "30", "--t-d", "20"}).code, 1);
  EXPECT_EQ(Cli({"run", "--scenario", "nope"}).code, 1);
  EXPECT_EQ(Cli({"adversary"}).code, 1);
  EXPECT_EQ(Cli({"adversary", "--scenario", "nope"}).code, 1);
  EXPECT_EQ(Cli({"montecarlo", "--trials", "99"}).code, 1);
  EXPECT_EQ(Cli({"inspect", (dir_ / "missing.log").string()}).code, 1);
  EXPECT_EQ(Cli({"--help"}).code, 0);
}

TEST_F(CliTest, AbortExitsTwo) {
  const Result r = Cli({"run", "--ell", "2", "--scenario", "malformed-ywin"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(Field(r.out, "aborted"), "1");
}

TEST_F(CliTest, AdversaryVerdicts) {
  const Result w = Cli({"adversary", "--scenario", "withhold-sigma", "--ell", "2"});
  EXPECT_EQ(w.code, 0);
  EXPECT_EQ(Field(w.out, "verdict"), "pass");
  EXPECT_EQ(Field(w.out, "balance.main.dealer.final"), Field(w.out, "balance.main.dealer.initial"));
  EXPECT_EQ(Field(w.out, "balance.main.party.final"), Field(w.out, "balance.main.party.initial"));

  const Result m = Cli({"adversary", "--scenario", "malformed-ywin", "--ell", "2"});
  EXPECT_EQ(Field(m.out, "verdict"), "pass");
  EXPECT_EQ(Field(m.out, "funded"), "0");
  EXPECT_EQ(m.out.find("tx.0="), std::string::npos);

  const Result h = Cli({"adversary", "--scenario", "honest", "--ell", "2", "--trials", "5"});
  EXPECT_EQ(h.code, 0);
  EXPECT_EQ(Field(h.out, "passed"), "5");
}

TEST_F(CliTest, MonteCarloSummaryAndCsv) {
  const auto csv = dir_ / "mc.csv";
  const Result r = Cli({"montecarlo", "--ell", "0", "--trials", "100", "--seed", "3", "--out", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Field(r.out, "wins"), "100");
  EXPECT_EQ(Field(r.out, "within_3sigma"), "yes");
  const std::string first = Slurp(csv);
  EXPECT_EQ(first.rfind("trial,seed,y_tgt,y_gss,won\n", 0), 0u);
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 101);
  ASSERT_EQ(Cli({"montecarlo", "--ell", "0", "--trials", "100", "--seed", "3", "--out", csv.string()}).code, 0);
  EXPECT_EQ(Slurp(csv), first);
}

TEST_F(CliTest, BenchRowsAndCap) {
  const Result r = Cli({"bench", "--ell", "1", "--ell-max", "3", "--lambda", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "ell,prove_s,verify_s,proof_bytes");
  std::vector<long> sizes;
  while (std::getline(lines, line)) sizes.push_back(std::stol(line.substr(line.rfind(',') + 1)));
  ASSERT_EQ(sizes.size(), 3u);
  EXPECT_LT(sizes[0], sizes[1]);
  EXPECT_LT(sizes[1], sizes[2]);
  const Result refused = Cli({"bench", "--ell", "17"});
  EXPECT_EQ(refused.code, 1);
  EXPECT_FALSE(refused.err.empty());
}

TEST_F(CliTest, InspectRendersExportedLedger) {
  const auto log = dir_ / "win.log";
  const Result r = Cli({"run", "--ell", "0", "--out", log.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Result shown = Cli({"inspect", log.string()});
  ASSERT_EQ(shown.code, 0) << shown.err;
  EXPECT_NE(shown.out.find("4 transaction(s)"), std::string::npos);

  const auto empty = dir_ / "empty.log";
  std::ofstream(empty) << "# proswap-ledger v1\n";
  const Result e = Cli({"inspect", empty.string()});
  EXPECT_EQ(e.code, 0);
  EXPECT_NE(e.out.find("0 transaction(s)"), std::string::npos);

  const auto broken = dir_ / "broken.log";
  std::ofstream(broken) << "# proswap-ledger v1\ngarbage\n";
  const Result b = Cli({"inspect", broken.string()});
  EXPECT_EQ(b.code, 1);
  EXPECT_NE(b.err.find("line 2"), std::string::npos) << b.err;
}

TEST_F(CliTest, CrossChainWritesBothLedgers) {
  const auto log = dir_ / "x.log";
  ASSERT_EQ(Cli({"run", "--cross-chain", "--ell", "0", "--out", log.string()}).code, 0);
  EXPECT_TRUE(fs::exists(log));
  EXPECT_TRUE(fs::exists(log.string() + ".b"));
  EXPECT_EQ(Cli({"inspect", log.string() + ".b"}).code, 0);
}
