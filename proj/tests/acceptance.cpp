// One line per acceptance criterion; exit status 0 iff every line passes.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cwb/suites.hpp"

using namespace cwb;

namespace {

struct Criterion {
  int number;
  std::string suite;
  double limit;  // seconds, 0 for none
  std::string text;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_quiet(const std::string& cmd) {
  int st = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "acceptability", 10, "s-m-n, universal, padding on 50 seeded cases each"},
      {2, "recursion", 30, "fixed points and quines on n <= 20, family totality"},
      {3, "extension", 120, "case table and items i/ii"},
      {4, "markov-to-k", 300, "Friedberg set in the extended naturals on 10 points"},
      {5, "difference", 0, "two-level difference set against brute force"},
      {6, "friedberg", 0, "Cantor Friedberg queries, scan length, order containment, anti-enumeration"},
      {7, "complexity", 0, "right-c.e. monotonicity, Km prefix monotonicity, oracle stability"},
      {8, "adversaries", 120, "cheating converters refuted, learner forced through 5 guesses"},
      {9, "baire", 0, "Sierpinski and Cantor maps into open sets of Baire space, relative algorithm"},
  };
  SuiteConfig cfg;
  bool all = true;
  for (const Criterion& c : criteria) {
    const Suite* s = find_suite(c.suite);
    auto t0 = std::chrono::steady_clock::now();
    SuiteResult r = run_suite(*s, cfg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = r.passed() && (c.limit == 0 || secs < c.limit);
    all = all && ok;
    std::size_t passed = 0;
    for (const Assertion& a : r.assertions) passed += a.passed;
    std::printf("%s criterion %d: %s [%zu/%zu assertions, %.1f s%s]\n", ok ? "PASS" : "FAIL", c.number, c.text.c_str(),
                passed, r.assertions.size(), secs,
                c.limit > 0 ? (" of " + std::to_string(static_cast<int>(c.limit)) + " s").c_str() : "");
    for (const Assertion& a : r.assertions)
      if (!a.passed) std::printf("    failed: %s (%s)\n", a.name.c_str(), a.detail.c_str());
    std::fflush(stdout);
  }

  // determinism of the full report
  std::string dir = std::string(CWB_WORKDIR);
  std::string a = dir + "/acceptance_report_1.json", b = dir + "/acceptance_report_2.json";
  int s1 = run_quiet(std::string(CWB_BINARY) + " check all --report " + a);
  int s2 = run_quiet(std::string(CWB_BINARY) + " check all --report " + b);
  std::string ra = slurp(a), rb = slurp(b);
  bool same = s1 == 0 && s2 == 0 && !ra.empty() && ra == rb;
  all = all && same;
  std::printf("%s criterion 10: cwb check all twice gives byte-identical reports [exit %d/%d, %zu bytes]\n",
              same ? "PASS" : "FAIL", s1, s2, ra.size());
  return all ? 0 : 1;
}
