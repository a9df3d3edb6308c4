#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rsieve/cli.hpp"
#include "rsieve/report.hpp"

using namespace rsieve;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "rsieve");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST(Cli, VerifyCountsPeriod) {
  const auto r = invoke({"verify", "--suite", "prop-2.14"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["outcome"], "pass");
  EXPECT_EQ(j["details"]["c_k"], "1485");
  EXPECT_TRUE(j["witness"].is_null());
  EXPECT_FALSE(j.contains("timestamp"));
}

TEST(Cli, VerifyListNamesEverySuite) {
  const auto r = invoke({"verify", "--list"});
  ASSERT_EQ(r.code, 0);
  const Json j = r.json();
  std::vector<std::string> ids;
  for (const auto& s : j["suites"]) ids.push_back(s["id"]);
  EXPECT_EQ(ids, (std::vector<std::string>{"prop-2.14", "thm-4.13", "lemma-5.2", "prop-2.16", "lemma-6.2", "lemma-7.1",
                                           "lemma-7.6-survey", "thm-8.8-scan"}));
}

TEST(Cli, GoldbachReport) {
  const auto r = invoke({"goldbach", "--x", "72"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["c_k_x"], 12);
  EXPECT_EQ(j["oracle_count"], 6);
  EXPECT_EQ(j["permitted_indices"].size(), 11u);

  const auto p = invoke({"goldbach", "--x", "72", "--p", "23"});
  EXPECT_EQ(p.json()["q"], 7);
  EXPECT_EQ(invoke({"goldbach", "--x", "71"}).code, 2);
}

TEST(Cli, CountMatchesTableScheme) {
  const auto r = invoke({"count", "--scheme", "[[0],[0,2],[0,3],[3,5]]", "--lo", "1", "--hi", "210"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["count"], 15);
  const auto csv = invoke({"--format", "csv", "count", "--scheme", "[[0],[0,2],[0,3],[3,5]]", "--lo", "1", "--hi", "210"});
  EXPECT_EQ(csv.out, "interval,count,density\n\"[1,210]\",15,1/2\n");
}

TEST(Cli, SchemeFileArgument) {
  const auto path = temp_file("rsieve_scheme.json");
  std::ofstream(path) << R"({"selected": [[0],[0,2],[0,3],[3,5]]})";
  const auto r = invoke({"count", "--scheme", "@" + path.string(), "--lo", "1", "--hi", "49"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["count"], 4);  // 1, 7, 37, 49
  std::filesystem::remove(path);
  EXPECT_EQ(invoke({"count", "--scheme", "@" + path.string()}).code, 2);
}

TEST(Cli, ExtremaIsByteIdenticalAcrossRuns) {
  const std::vector<std::string> args{"extrema", "--k", "35", "--samples", "200", "--seed", "17"};
  const auto a = invoke(args), b = invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, invoke({"extrema", "--k", "35", "--samples", "200", "--seed", "18"}).out);
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  const auto one = invoke({"count", "--k", "8", "--index", "3", "--lo", "1", "--hi", "3000000"});
  const auto four = invoke({"--threads", "4", "count", "--k", "8", "--index", "3", "--lo", "1", "--hi", "3000000"});
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_EQ(one.out, four.out);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"bogus"}).code, 2);
  EXPECT_EQ(invoke({"primes", "--no-such-flag"}).code, 2);
  EXPECT_EQ(invoke({"--format", "xml", "primes", "--limit", "10"}).code, 2);
  const auto bad = invoke({"count", "--scheme", "[[0],[0", "--lo", "1", "--hi", "10"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("malformed scheme"), std::string::npos);
  EXPECT_EQ(invoke({"count", "--scheme", "[[0],[0,0]]", "--lo", "1", "--hi", "10"}).code, 2);
  EXPECT_EQ(invoke({"verify", "--suite", "no-such-suite"}).code, 2);
  EXPECT_EQ(invoke({"bounds", "--k", "2", "--n", "10"}).code, 2);
}

TEST(Cli, CapsFromEnvironmentAndFlags) {
  const std::vector<std::string> args{"enumerate", "--x", "72", "--lo", "1", "--hi", "72"};
  EXPECT_EQ(invoke(args).code, 0);
  ::setenv("RSIEVE_ENUMERATION_CAP", "3", 1);
  const auto capped = invoke(args);
  EXPECT_EQ(capped.code, 2);
  EXPECT_NE(capped.err.find("required 12"), std::string::npos);
  std::vector<std::string> with_flag{"--enumeration-cap", "100"};
  with_flag.insert(with_flag.end(), args.begin(), args.end());
  EXPECT_EQ(invoke(with_flag).code, 0);
  ::unsetenv("RSIEVE_ENUMERATION_CAP");
}

TEST(Cli, OutWritesFileInsteadOfStdout) {
  const auto path = temp_file("rsieve_out.json");
  const auto r = invoke({"--out", path.string(), "density", "--k", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream is(path);
  const Json j = Json::parse(is);
  EXPECT_EQ(j, invoke({"density", "--k", "4"}).json());
  std::filesystem::remove(path);
}

TEST(Cli, LogAppendsProvenance) {
  const auto path = temp_file("rsieve_cli_log.jsonl");
  ASSERT_EQ(invoke({"--log", path.string(), "verify", "--suite", "prop-2.14"}).code, 0);
  ASSERT_EQ(invoke({"--log", path.string(), "density", "--k", "4"}).code, 0);
  std::ifstream is(path);
  std::vector<Json> lines;
  for (std::string l; std::getline(is, l);) lines.push_back(Json::parse(l));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0]["suite"], "prop-2.14");
  EXPECT_EQ(lines[0]["version"], kToolVersion);
  EXPECT_TRUE(lines[0].contains("timestamp"));
  EXPECT_EQ(lines[1]["suite"], "density");
  EXPECT_EQ(lines[1]["outcome"], "report-only");
  std::filesystem::remove(path);
}

TEST(Cli, BoundsExample) {
  const auto r = invoke({"bounds", "--k", "4", "--n", "421"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["lower"]["num"], "210");
  EXPECT_EQ(j["lower"]["den"], "629");
  EXPECT_EQ(j["upper"]["num"], "315");
  EXPECT_EQ(j["upper"]["den"], "421");
}

TEST(Cli, ScanSummary) {
  const auto r = invoke({"scan", "--lo", "6", "--hi", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["reports"], 48);
  EXPECT_EQ(r.json()["violation_total"], 0);
}

TEST(Cli, SchemeOutputParsesBack) {
  const auto shown = invoke({"scheme", "--scheme", "[[0],[0,2],[0,3],[3,5]]"});
  ASSERT_EQ(shown.code, 0) << shown.err;
  const Json j = shown.json();
  EXPECT_EQ(j["kind"], "generic");
  EXPECT_EQ(j["selected"].dump(), "[[0],[0,2],[0,3],[3,5]]");
  const auto again = invoke({"scheme", "--scheme", j.dump()});
  EXPECT_EQ(again.out, shown.out);
  Json wrong = j;
  wrong["primes"] = {2, 3, 5, 11};
  EXPECT_EQ(invoke({"scheme", "--scheme", wrong.dump()}).code, 2);
}
