#include <gtest/gtest.h>
#include <json.hpp>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cwb/term.hpp"
#include "reference.hpp"

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::vector<nlohmann::json> lines;
};

Run run_cli(const std::string& args) {
  Run r;
  std::string cmd = std::string(CWB_BINARY) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  std::stringstream ss(r.out);
  for (std::string line; std::getline(ss, line);)
    if (!line.empty() && line[0] == '{') r.lines.push_back(nlohmann::json::parse(line));
  return r;
}

std::vector<nlohmann::json> events(const Run& r, const std::string& name) {
  std::vector<nlohmann::json> out;
  for (const auto& l : r.lines)
    if (l.contains("event") && l["event"] == name) out.push_back(l);
  return out;
}

// header first, then stage-ordered events
void expect_trace_shape(const Run& r) {
  ASSERT_FALSE(r.lines.empty());
  EXPECT_TRUE(r.lines[0].contains("config"));
  EXPECT_TRUE(r.lines[0].contains("version"));
  std::uint64_t last = 0;
  for (std::size_t i = 1; i < r.lines.size(); ++i) {
    ASSERT_TRUE(r.lines[i].contains("stage"));
    std::uint64_t s = r.lines[i]["stage"];
    EXPECT_GE(s, last);
    last = s;
  }
}

}  // namespace

TEST(Cli, EvalExample) {
  auto r = run_cli("eval -p \"(comp succ id)\" -n 5 --fuel 100");
  EXPECT_EQ(r.status, 0);
  expect_trace_shape(r);
  auto res = events(r, "result");
  ASSERT_EQ(res.size(), 1u);
  EXPECT_EQ(res[0]["data"]["value"], 6);
  EXPECT_EQ(r.lines[0]["config"]["fuel"], 100);
}

TEST(Cli, MalformedProgramIsAConfigError) {
  auto r = run_cli("eval -p \"(comp succ\"");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("offset"), std::string::npos);
}

TEST(Cli, OutOfFuelExitsTwo) { EXPECT_EQ(run_cli("eval -p \"(mu succ)\" --fuel 1e3").status, 2); }

TEST(Cli, BadCountsAndIdsExitOne) {
  EXPECT_EQ(run_cli("eval -p zero --fuel lots").status, 1);
  EXPECT_EQ(run_cli("construct no-such-thing").status, 1);
  EXPECT_EQ(run_cli("check no-such-suite").status, 1);
  EXPECT_EQ(run_cli("construct relative-k --oracle sometimes").status, 1);
  EXPECT_EQ(run_cli("construct friedberg-cantor --point cantor:2^w").status, 1);
  EXPECT_EQ(run_cli("").status, 1);
}

TEST(Cli, SmnMatchesTheInterpreter) {
  auto r = run_cli("smn -p \"(pair snd fst)\" -x 3");
  ASSERT_EQ(r.status, 0);
  auto idx = events(r, "index");
  ASSERT_EQ(idx.size(), 1u);
  cwb::Term t = cwb::parse(idx[0]["data"]["program"].get<std::string>());
  auto v = ref::run(t, 9, 1000);
  ASSERT_TRUE(v.halted);
  EXPECT_EQ(v.value, ref::pair(9, 3));
}

TEST(Cli, FixpointProbeTable) {
  std::string path = ::testing::TempDir() + "transformer.txt";
  std::ofstream(path) << "(lit 1)\n";
  auto r = run_cli("fixpoint -f " + path + " --probe 0..10 --fuel 1e5");
  ASSERT_EQ(r.status, 0);
  auto probes = events(r, "probe");
  ASSERT_EQ(probes.size(), 11u);
  // the transformer returns code 1 whatever it is given
  EXPECT_EQ(events(r, "fixed-point")[0]["data"]["transformed"], 1);
  for (std::size_t n = 0; n <= 10; ++n) {
    auto want = ref::run(cwb::decode(cwb::Natural(1)), n, 1000);
    EXPECT_EQ(probes[n]["data"]["self"].get<std::uint64_t>(), want.value.get_ui());
    EXPECT_TRUE(probes[n]["data"]["agree"].get<bool>());
  }
}

TEST(Cli, FriedbergCantorQueryCount) {
  auto r = run_cli("construct friedberg-cantor --point \"cantor:0^w\" --k 8 --budget 1e6");
  ASSERT_EQ(r.status, 0);
  expect_trace_shape(r);
  auto v = events(r, "verdict");
  ASSERT_EQ(v.size(), 1u);
  EXPECT_TRUE(v[0]["data"]["accepted"].get<bool>());
  EXPECT_LE(v[0]["data"]["bit_queries"].get<std::uint64_t>(), 1024u);
  EXPECT_EQ(events(r, "summary")[0]["data"]["verdict"], "accepted");
}

TEST(Cli, EmptyLemmaExtEmitsNothing) {
  auto r = run_cli("construct lemma-ext --A empty --k 3 --stages 1000");
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(events(r, "emit").empty());
  EXPECT_EQ(r.lines[0]["config"]["stages"], 1000);
}

TEST(Cli, AntiEnumerationFiveWitnesses) {
  auto r = run_cli("construct anti-enum --list tails:5 --budget 1e6");
  ASSERT_EQ(r.status, 0);
  auto w = events(r, "witness");
  ASSERT_EQ(w.size(), 5u);
  for (const auto& e : w) EXPECT_TRUE(e["data"]["replay"].get<bool>());
}

TEST(Cli, SilentSemideciderReportsBudget) {
  EXPECT_EQ(run_cli("construct friedberg-cantor --point cantor:1^w --k 4 --budget 1e4").status, 2);
  EXPECT_EQ(run_cli("construct adversary-converter --candidate greedy --budget 256 --fuel 1e4").status, 2);
}

TEST(Cli, BoundedOracleIsEchoedAndFlagged) {
  auto r = run_cli("construct relative-k --point cantor:0^w --oracle bounded:1e4 --budget 1e3");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.lines[0]["config"]["oracle"], "bounded:1e4");
  EXPECT_TRUE(events(r, "verdict")[0]["data"]["approximate"].get<bool>());
}

TEST(Cli, SigmaTwoSingleton) {
  auto r = run_cli("construct sigma2 --point nbar:2 --stages 1e4");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(events(r, "summary")[0]["data"]["C"], nlohmann::json::array({"nbar:2"}));
}

TEST(Cli, TracesAreByteIdentical) {
  for (const char* args : {"construct nce --stages 1000", "construct sierp-ob --point sierp:top --stages 1e4",
                           "construct adversary-learner", "construct dense --stages 1e4"}) {
    auto a = run_cli(args), b = run_cli(args);
    EXPECT_EQ(a.status, b.status) << args;
    EXPECT_EQ(a.out, b.out) << args;
    expect_trace_shape(a);
  }
}

TEST(Cli, OutFlagWritesTheTrace) {
  std::string path = ::testing::TempDir() + "trace.jsonl";
  auto r = run_cli("construct relative-k --out " + path);
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(nlohmann::json::parse(first)["config"]["command"], "construct");
}

TEST(Cli, SingleSuiteCheck) {
  std::string path = ::testing::TempDir() + "report.json";
  auto r = run_cli("check acceptability --report " + path);
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("PASS acceptability: smn equation"), std::string::npos);
  std::ifstream in(path);
  auto rep = nlohmann::json::parse(in);
  EXPECT_TRUE(rep["passed"].get<bool>());
  EXPECT_EQ(rep["suites"].size(), 1u);
}
