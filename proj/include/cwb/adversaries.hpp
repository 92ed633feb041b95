#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cwb/cantor.hpp"
#include "cwb/witness.hpp"

namespace cwb {

using AdversaryOutcome = std::variant<RefutationWitness, BudgetReport>;

// ---------------------------------------------------------------------------
// Converting K-names of Cantor points into indices

/// A candidate converter: reads bits of the point, gets the complexity bound
/// k, returns an index. Returning nothing means it stalled or ran out of bits.
using Converter = std::function<std::optional<Natural>(BitReader& bits, std::uint64_t k)>;

/// x_i: bit j is 1 iff φ_i(i) halts within j steps. So x_i = 0^ω when φ_i(i)
/// diverges and 0^t 1^ω when it halts in exactly t steps.
inline Natural halting_pattern(const Natural& i) {
  using namespace dsl;
  return encode(if0(clock_halted(lit(i), lit(i), id()), lit(1), lit(0)));
}

/// An index that halts on every input after running the loop program under
/// a clock of m steps. Its code stays small.
inline Natural counting_index(std::uint64_t m) {
  Natural loop = encode(dsl::mu(dsl::succ()));
  return encode(Term::comp(Term::clock(), Term::lit(pair(loop, pair(Natural(0), Natural(m))))));
}

struct ConverterUniverse {
  Natural diverging;                 // φ_i(i)↑ by construction
  std::vector<Natural> halting;      // φ_i(i)↓, in increasing halting time
  std::vector<std::uint64_t> times;  // exact halting times
};

inline ConverterUniverse converter_universe() {
  ConverterUniverse u;
  u.diverging = encode(dsl::mu(dsl::succ()));
  for (std::uint64_t m : {0, 3, 10, 30, 100, 300}) {
    Natural i = counting_index(m);
    EvalResult r = eval(i, i, 10000000);
    if (!r.halted) throw std::logic_error("counting index did not halt");
    u.halting.push_back(i);
    u.times.push_back(r.steps);
  }
  return u;
}

namespace detail {

inline Type2Name pattern_name(const Natural& i) { return point_filter(Point::backed(SpaceId::Cantor, halting_pattern(i))); }

struct ConverterRun {
  std::optional<Natural> out;
  std::uint64_t use = 0;
};

inline ConverterRun run_converter(const Converter& c, const Natural& i, std::uint64_t k, std::uint64_t max_bits) {
  BitReader r(pattern_name(i), max_bits + 1);
  auto out = c(r, k);
  return {out, r.bit_queries()};
}

inline std::optional<std::uint64_t> bit_of(const Natural& index, std::uint64_t pos, std::uint64_t fuel) {
  EvalResult r = eval(index, pos, fuel);
  if (!r.halted || !r.value.is_small()) return std::nullopt;
  return r.value.u64();
}

}  // namespace detail

/// Runs the converter on x_i for i diverging, reads its use u, then on x_j
/// for a halting j with time t > u. Both inputs agree on the first u bits,
/// so a deterministic converter answers alike; the points differ at t.
/// Refutes with (a) an input whose output index computes a wrong bit, or
/// (b) one index returned for two distinct points.
inline AdversaryOutcome converter_adversary(const Converter& cand, std::uint64_t max_bits, std::uint64_t fuel) {
  const ConverterUniverse U = converter_universe();
  std::uint64_t k = bitlen(0);
  for (const Natural& i : U.halting) k = std::max<std::uint64_t>(k, halting_pattern(i).bit_length());
  k = std::max<std::uint64_t>(k, halting_pattern(U.diverging).bit_length());

  auto r0 = detail::run_converter(cand, U.diverging, k, max_bits);
  if (!r0.out) return BudgetReport{"converter gave no index on the diverging input", r0.use};
  std::size_t pick = U.halting.size();
  for (std::size_t j = 0; j < U.halting.size(); ++j)
    if (U.times[j] > r0.use) {
      pick = j;
      break;
    }
  if (pick == U.halting.size()) return BudgetReport{"use exceeds every curated halting time", r0.use};
  const Natural& hi = U.halting[pick];
  const std::uint64_t t = U.times[pick];
  auto r1 = detail::run_converter(cand, hi, k, max_bits);
  if (!r1.out) return BudgetReport{"converter gave no index on the halting input", r1.use};

  RefutationWitness w;
  w.clause = "the converter returns an index of the named point";
  w.note("k", std::to_string(k));
  w.note("use", std::to_string(r0.use));
  w.note("diverging_i", digest(U.diverging));
  w.note("halting_i", digest(hi));
  w.note("t", std::to_string(t));
  w.note("index_on_diverging", digest(*r0.out));
  w.note("index_on_halting", digest(*r1.out));

  auto replay_outputs = [cand, k, max_bits, d = U.diverging, hi, o0 = *r0.out, o1 = *r1.out] {
    auto a = detail::run_converter(cand, d, k, max_bits);
    auto b = detail::run_converter(cand, hi, k, max_bits);
    return a.out && b.out && *a.out == o0 && *b.out == o1;
  };

  // (a) a computed bit disagrees with the point at position t
  struct Case {
    const Natural& i;
    const Natural& idx;
    const char* which;
  };
  for (Case c : {Case{hi, *r1.out, "halting"}, Case{U.diverging, *r0.out, "diverging"}}) {
    auto got = detail::bit_of(c.idx, t, fuel);
    auto want = detail::bit_of(halting_pattern(c.i), t, fuel);
    if (got && want && *got != *want) {
      w.note("kind", "wrong-bit");
      w.note("input", c.which);
      w.note("position", std::to_string(t));
      w.note("expected", std::to_string(*want));
      w.note("computed", std::to_string(*got));
      w.replay = [replay_outputs, i = c.i, idx = c.idx, t, fuel, g = *got, x = *want] {
        return replay_outputs() && detail::bit_of(idx, t, fuel) == g && detail::bit_of(halting_pattern(i), t, fuel) == x &&
               g != x;
      };
      return w;
    }
  }
  // (b) the same index for two points that differ at t
  if (*r0.out == *r1.out) {
    w.note("kind", "same-index");
    w.replay = [replay_outputs, d = U.diverging, hi, t, fuel] {
      return replay_outputs() && detail::bit_of(halting_pattern(d), t, fuel) == 0u &&
             detail::bit_of(halting_pattern(hi), t, fuel) == 1u;
    };
    return w;
  }
  return BudgetReport{"outputs differ and neither computed bit settled within fuel", r0.use + r1.use};
}

/// Always answers the index of 0^ω without reading anything.
inline Converter constant_zero_converter() {
  Natural z = encode(dsl::zero());
  return [z](BitReader&, std::uint64_t) -> std::optional<Natural> { return z; };
}

/// Reads min(k, cap) bits and returns the first code up to `codes` that
/// reproduces them within `fuel`, else a program for the prefix then zeros.
inline Converter first_consistent_converter(std::uint64_t codes = 4096, std::uint64_t fuel = 2000, std::uint64_t cap = 64) {
  return [=](BitReader& r, std::uint64_t k) -> std::optional<Natural> {
    std::uint64_t len = std::min(k, cap);
    std::vector<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < len; ++i) {
      auto b = r.bit(i);
      if (!b) return std::nullopt;
      seen.push_back(*b);
    }
    for (std::uint64_t e = 0; e <= codes; ++e) {
      bool ok = true;
      for (std::uint64_t i = 0; ok && i < len; ++i) {
        EvalResult v = detail::RunCache::get().run(e, i, fuel);
        ok = v.halted && v.value == Natural(seen[i]);
      }
      if (ok) return Natural(e);
    }
    return Programs::eventually_constant(seen, 0);
  };
}

/// Reads bits forever; stands in for a converter that overruns its budget.
inline Converter greedy_converter() {
  return [](BitReader& r, std::uint64_t) -> std::optional<Natural> {
    for (std::uint64_t i = 0;; ++i)
      if (!r.bit(i)) return std::nullopt;
  };
}

// ---------------------------------------------------------------------------
// Learning indices of c.e. sets in the limit

/// A candidate learner: from the name entries read so far (codes of finite
/// subsets) and a complexity bound, the current index guess.
using Learner = std::function<Natural(const std::vector<Natural>& entries, std::uint64_t k)>;

namespace detail {

// W_g agrees with F on [0, max F + 1] at the given fuel
inline bool looks_right(const Natural& g, const std::set<std::uint64_t>& F, std::uint64_t fuel) {
  std::uint64_t top = F.empty() ? 0 : *F.rbegin() + 1;
  for (std::uint64_t x = 0; x <= top; ++x)
    if (eval(g, x, fuel).halted != (F.count(x) > 0)) return false;
  return true;
}

}  // namespace detail

/// Presents F_0 = {0} through the codes of its finite subsets. Whenever the
/// guess agrees with F_i on a window, an element outside the guess joins,
/// giving F_{i+1}; an agreeing guess for F_i cannot be right for F_{i+1}, so
/// the guesses keep changing. Stops at v distinct agreeing guesses. A guess
/// unchanged for `patience` entries without agreeing is reported with the
/// element it gets wrong.
inline AdversaryOutcome learner_adversary(const Learner& cand, std::uint64_t v, std::uint64_t max_entries,
                                          std::uint64_t fuel = 20000, std::uint64_t patience = 256,
                                          std::uint64_t k = 64) {
  std::set<std::uint64_t> F{0};
  std::vector<Natural> entries;
  std::vector<Natural> guesses;  // one per entry
  std::vector<Natural> agreeing;
  std::vector<std::string> stages;
  std::uint64_t mask = 0, since_change = 0;
  auto subset = [&](std::uint64_t m) {
    std::vector<std::uint64_t> out;
    std::uint64_t j = 0;
    for (auto x : F) {
      if (m >> j & 1) out.push_back(x);
      ++j;
    }
    return pown_code(out);
  };
  auto set_text = [](const std::set<std::uint64_t>& s) {
    std::string t = "{";
    for (auto x : s) t += (t.size() > 1 ? "," : "") + std::to_string(x);
    return t + "}";
  };
  auto make_replay = [&] {
    return [cand, k, entries, guesses] {
      std::vector<Natural> seen;
      for (std::size_t j = 0; j < entries.size(); ++j) {
        seen.push_back(entries[j]);
        if (cand(seen, k) != guesses[j]) return false;
      }
      return true;
    };
  };
  stages.push_back(set_text(F));
  while (entries.size() < max_entries) {
    std::uint64_t full = F.size() >= 63 ? ~0ULL : (std::uint64_t(1) << F.size());
    entries.push_back(subset(mask++ % full));
    Natural g = cand(entries, k);
    bool changed = guesses.empty() || guesses.back() != g;
    guesses.push_back(g);
    since_change = changed ? 0 : since_change + 1;
    if (!changed && since_change != patience) continue;
    if (detail::looks_right(g, F, fuel)) {
      if (std::find(agreeing.begin(), agreeing.end(), g) == agreeing.end()) agreeing.push_back(g);
      if (agreeing.size() >= v) {
        RefutationWitness w;
        w.clause = "the learner converges on every presented set";
        w.note("distinct_guesses", std::to_string(agreeing.size()));
        w.note("entries", std::to_string(entries.size()));
        std::string st;
        for (const auto& s : stages) st += (st.empty() ? "" : " ") + s;
        w.note("stages", st);
        std::string gs;
        for (const auto& a : agreeing) gs += (gs.empty() ? "" : " ") + digest(a);
        w.note("guesses", gs);
        auto same = make_replay();
        w.replay = [same, agreeing, v] {
          std::vector<Natural> d;
          for (const auto& a : agreeing)
            if (std::find(d.begin(), d.end(), a) == d.end()) d.push_back(a);
          return same() && d.size() >= v;
        };
        return w;
      }
      F.insert(*F.rbegin() + 1);
      stages.push_back(set_text(F));
      mask = 0;
      since_change = 0;
      continue;
    }
    if (since_change == patience) {
      // the guess sat through a whole stretch of F's name without agreeing
      std::uint64_t top = *F.rbegin() + 1;
      for (std::uint64_t x = 0; x <= top; ++x) {
        bool halts = eval(g, x, fuel).halted;
        bool in = F.count(x) > 0;
        if (halts == in) continue;
        RefutationWitness w;
        w.clause = "the learner's guess enumerates the presented set";
        w.note("set", set_text(F));
        w.note("guess", digest(g));
        w.note("element", std::to_string(x));
        // an extra element is certain; a missing one is only checked within fuel
        w.note("error", halts ? "enumerates an element outside the set" : "misses an element within fuel");
        w.note("entries", std::to_string(entries.size()));
        auto same = make_replay();
        w.replay = [same, g, x, fuel, halts] { return same() && eval(g, x, fuel).halted == halts; };
        return w;
      }
    }
  }
  return BudgetReport{"fewer than " + std::to_string(v) + " distinct guesses within the entry budget", entries.size()};
}

/// Guesses the finite set of elements seen in the entries so far.
inline Learner seen_so_far_learner() {
  return [](const std::vector<Natural>& entries, std::uint64_t) {
    std::set<std::uint64_t> seen;
    for (const Natural& c : entries)
      for (auto x : pown_set(c)) seen.insert(x);
    std::vector<Natural> xs(seen.begin(), seen.end());
    return Programs::finite_set(xs);
  };
}

/// Always guesses the same index.
inline Learner constant_learner(Natural g) {
  return [g](const std::vector<Natural>&, std::uint64_t) { return g; };
}

}  // namespace cwb
