#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cwb/eval.hpp"

namespace cwb {

/// W_e[s] = {n <= s : eval(e,n,s) halts}; monotone in s.
inline std::vector<std::uint64_t> we_stage(const Natural& e, std::uint64_t s) {
  std::vector<std::uint64_t> out;
  Term t = decode(e);
  for (std::uint64_t n = 0; n <= s; ++n)
    if (eval(t, n, s).halted) out.push_back(n);
  return out;
}

/// A c.e. set given by an index, viewed through stages.
///
/// Two readings of "x enumerated by stage s": `in_view` caps x at s as in
/// W_e[s]; `contains` only bounds the fuel, which is what makes sense when x
/// is itself a (huge) program index.
struct StagedSet {
  Natural e;

  std::vector<std::uint64_t> view(std::uint64_t s) const { return we_stage(e, s); }
  bool in_view(const Natural& x, std::uint64_t s) const { return x <= Natural(s) && contains(x, s); }
  bool contains(const Natural& x, std::uint64_t s) const { return eval(e, x, s).halted; }
  /// Least s with contains(x,s), searched up to `max_stage`.
  std::optional<std::uint64_t> entry(const Natural& x, std::uint64_t max_stage) const {
    return halting_steps(e, x, max_stage);
  }
  /// x in A[at s]: enumerated at s and not before.
  bool enters_at(const Natural& x, std::uint64_t s) const {
    auto t = entry(x, s);
    return t && *t == s;
  }
};

}  // namespace cwb
