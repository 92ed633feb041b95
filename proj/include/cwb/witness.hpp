#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cwb/natural.hpp"

namespace cwb {

/// Short stable text for a natural that may be astronomically large: the
/// value itself below 2^64, else its approximate bit length and tree hash.
inline std::string digest(const Natural& n) {
  if (n.is_small()) return n.str();
  char buf[64];
  std::snprintf(buf, sizeof buf, "#%016zx/~2^%.6Lg", n.hash(), n.log2_approx());
  return buf;
}

/// The transcript of a refuted contract: what was fed, what the candidate
/// did, and a replay that re-derives the violation from the transcript alone.
struct RefutationWitness {
  std::string clause;
  std::vector<std::pair<std::string, std::string>> transcript;
  std::function<bool()> replay;

  void note(std::string key, std::string value) { transcript.emplace_back(std::move(key), std::move(value)); }
  std::string get(const std::string& key) const {
    for (const auto& [k, v] : transcript)
      if (k == key) return v;
    return {};
  }
};

/// A harness ran out of budget before finding a violation. Not a verdict.
struct BudgetReport {
  std::string reason;
  std::uint64_t spent = 0;
};

}  // namespace cwb
