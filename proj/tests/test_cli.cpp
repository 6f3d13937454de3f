#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "qdilog/cli.hpp"

using namespace qdilog;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qdilog");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

int run_binary(const std::string& args) {
  const int status = std::system((std::string(QDILOG_BINARY) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string sample(const std::string& name) { return std::string(QDILOG_SAMPLES) + "/" + name; }

}  // namespace

TEST(Cli, ExitZeroOnPass) {
  const auto r = run_cli({"verify", "--identity", "seven_term", "--window", "3", "--precision", "20"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("PASS  seven_term"), std::string::npos);
}

TEST(Cli, ExitOneOnFailedReplay) {
  const auto r = run_cli({"replay", sample("braid_wrong_end.txt")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("failed: expected end"), std::string::npos);
}

TEST(Cli, ExitTwoOnBadConfiguration) {
  EXPECT_EQ(run_cli({"verify", "--identity", "seven_term", "--precision", "0"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "--identity", "seven_term", "--window", "9"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "--identity", "seven_term", "--sites", "33"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "--identity", "no_such_identity"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "--identity", "seven_term", "--format", "yaml"}).code, 2);
  EXPECT_EQ(run_cli({"verify"}).code, 2);
  EXPECT_EQ(run_cli({"replay", "/nonexistent/script.txt"}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, ExitTwoWhenAnItemErrors) {
  const auto r = run_cli({"verify", "--identity", "seven_term,two_site_set", "--site", "5", "--format", "structured"});
  EXPECT_EQ(r.code, 2);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["reports"][0]["status"], "ERROR");
  EXPECT_EQ(j["summary"]["errors"], 2);
}

TEST(Cli, ParseErrorReportsLine) {
  const auto dir = std::filesystem::temp_directory_path() / "qdilog_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "broken.txt").string();
  std::ofstream(path) << "start: b1 b2 b1\n@0 defb[1] fwd\n@x defb[2] fwd\nend: b1\n";
  const auto r = run_cli({"replay", path});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST(Cli, BinaryExitCodes) {
  EXPECT_EQ(run_binary("verify --identity seven_term --window 3 --precision 20"), 0);
  EXPECT_EQ(run_binary("replay " + sample("braid_wrong_end.txt")), 1);
  EXPECT_EQ(run_binary("verify --identity seven_term --precision 0"), 2);
}

TEST(Cli, FullCatalogAtSixSites) {
  const auto r = run_cli({"verify", "--identity", "all", "--sites", "6", "--precision", "14", "--jobs", "4"});
  EXPECT_EQ(r.code, 0) << r.out;
  for (const auto& name : all_items()) EXPECT_NE(r.out.find(" " + name + " "), std::string::npos) << name;
}

TEST(Cli, StructuredReportFields) {
  const auto r = run_cli({"verify", "--identity", "seven_term", "--format", "structured"});
  ASSERT_EQ(r.code, 0);
  const auto rep = Json::parse(r.out)["reports"][0];
  std::vector<std::string> keys;
  for (const auto& [k, v] : rep.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"schema_version", "identity", "params", "status", "per_monomial",
                                             "certificate_summary", "elapsed_ms"}));
  EXPECT_EQ(rep["schema_version"], kSchemaVersion);
  EXPECT_EQ(rep["params"]["N"], 2);
  EXPECT_EQ(rep["params"]["W"], 3);
  EXPECT_EQ(rep["params"]["P"], 20);
  EXPECT_TRUE(rep["params"]["n"].is_null());
  EXPECT_EQ(rep["per_monomial"].size(), 49u);
  EXPECT_TRUE(rep["elapsed_ms"].is_null());
  const auto& m = rep["per_monomial"][0];
  EXPECT_TRUE(m.contains("target") && m.contains("lhs") && m.contains("rhs") && m.contains("match"));
}

TEST(Cli, ExactReportHasNoPrecision) {
  const auto r = run_cli({"verify", "--identity", "mult1", "--format", "structured"});
  const auto rep = Json::parse(r.out)["reports"][0];
  EXPECT_TRUE(rep["params"]["P"].is_null());
  EXPECT_EQ(rep["certificate_summary"]["backend"], "exact");
}

TEST(Cli, DeterministicAcrossJobs) {
  const std::vector<std::string> base{"verify", "--identity", "all", "--format", "structured", "--seed", "5"};
  auto with = [&](const char* jobs) {
    auto a = base;
    a.push_back("--jobs");
    a.push_back(jobs);
    return run_cli(a);
  };
  const auto a = with("1"), b = with("4"), c = with("4");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(b.out, c.out);
}

TEST(Cli, TimingsAreOptIn) {
  const auto r = run_cli({"verify", "--identity", "mult1", "--format", "structured", "--timings"});
  EXPECT_TRUE(Json::parse(r.out)["reports"][0]["elapsed_ms"].is_number());
}

TEST(Cli, OutputFile) {
  const auto path = (std::filesystem::temp_directory_path() / "qdilog_cli_report.json").string();
  std::filesystem::remove(path);
  const auto r = run_cli({"verify", "--identity", "pentagon", "--format", "structured", "--output", path});
  EXPECT_EQ(r.code, 0);
  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  EXPECT_EQ(Json::parse(buf.str())["summary"]["status"], "PASS");
}

TEST(Cli, ListText) {
  const auto r = run_cli({"list"});
  EXPECT_EQ(r.code, 0);
  const auto seven = r.out.find("seven_term");
  ASSERT_NE(seven, std::string::npos);
  EXPECT_NE(r.out.find("s(v)s(u^-1)s(u)s(v) = s(u^-1)s(v)s(u)", seven), std::string::npos);
  const auto rev = r.out.find("sigma_rev");
  ASSERT_NE(rev, std::string::npos);
  EXPECT_NE(r.out.find("translation by two steps", rev), std::string::npos);
}

TEST(Cli, ListStructured) {
  const auto r = run_cli({"list", "--format", "structured"});
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["identities"].size(), identity_catalog().size());
  bool found = false;
  for (const auto& s : j["scripts"])
    if (s["name"] == "sigma_rev") found = s["display"].get<std::string>().find("translation by two steps") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(Cli, ReplaySamples) {
  for (const char* f : {"braid.txt", "sigma_rel1.txt", "sigma_commute.txt", "seven_term.txt", "pentagon.txt",
                        "sigma_rev.txt"}) {
    const auto r = run_cli({"replay", sample(f), "--format", "structured"});
    EXPECT_EQ(r.code, 0) << f << r.out;
  }
}

TEST(Cli, RewriteWalkUsesSeed) {
  const auto a = run_cli({"verify", "--identity", "rewrite_walk", "--seed", "3", "--format", "structured"});
  const auto b = run_cli({"verify", "--identity", "rewrite_walk", "--seed", "3", "--format", "structured"});
  const auto c = run_cli({"verify", "--identity", "rewrite_walk", "--seed", "4", "--format", "structured"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
}
