#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cwb/adversaries.hpp"
#include "cwb/nbar.hpp"
#include "cwb/relative.hpp"
#include "cwb/structure.hpp"

namespace cwb {

// ---------------------------------------------------------------------------
// Acceptance suites: named lists of assertions with deterministic details.

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteConfig {
  std::uint64_t seed = 2024;
};

class SuiteRecorder {
 public:
  void check(std::string name, bool ok, std::string detail = {}) {
    items_.push_back({std::move(name), ok, std::move(detail)});
  }
  const std::vector<Assertion>& items() const { return items_; }

 private:
  std::vector<Assertion> items_;
};

struct SuiteResult {
  std::string id;
  std::vector<Assertion> assertions;

  bool passed() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
  }
};

struct Suite {
  std::string id;
  std::string summary;
  std::function<void(SuiteRecorder&, const SuiteConfig&)> body;
};

namespace suites {

using namespace dsl;

inline std::string count_text(std::uint64_t ok, std::uint64_t total) {
  return std::to_string(ok) + "/" + std::to_string(total);
}

inline bool same_run(const EvalResult& a, const EvalResult& b) {
  return a.halted == b.halted && (!a.halted || a.value == b.value);
}

inline const std::vector<Term>& curated_programs() {
  static const std::vector<Term> progs = [] {
    std::vector<Term> out;
    for (const char* s : {"zero", "succ", "(comp succ succ)", "(pair snd fst)", "(comp pred fst)",
                          "(if0 id (lit 7) (comp succ id))", "(mu (comp pred snd))", "(mu succ)",
                          "(mu (if0 snd succ zero))", "(comp (pair (lit 3) id) succ)",
                          "(if0 (comp pred id) zero (mu succ))", "(comp fst (pair id id))"})
      out.push_back(parse(s));
    return out;
  }();
  return progs;
}

inline const Natural& loop() {
  static const Natural l = encode(mu(succ()));
  return l;
}

// ---------------------------------------------------------------------------

inline void acceptability(SuiteRecorder& r, const SuiteConfig& cfg) {
  constexpr std::uint64_t fuel = 100000;
  std::mt19937_64 rng(cfg.seed);
  const auto& progs = curated_programs();
  auto pick = [&] { return encode(progs[rng() % progs.size()]); };

  std::uint64_t ok = 0;
  for (int i = 0; i < 50; ++i) {
    Natural e = pick();
    std::uint64_t x = rng() % 30, y = rng() % 30;
    EvalResult a = eval(smn(e, x), y, fuel + kSmnOverhead), b = eval(e, pair(x, y), fuel);
    ok += same_run(a, b) && (!a.halted || a.steps == b.steps + kSmnOverhead);
  }
  r.check("smn equation", ok == 50, count_text(ok, 50));

  ok = 0;
  Natural u = universal_index();
  for (int i = 0; i < 50; ++i) {
    Natural e = pick();
    std::uint64_t n = rng() % 30;
    EvalResult a = eval(u, pair(e, n), fuel + kUnivOverhead), b = eval(e, n, fuel);
    ok += same_run(a, b);
  }
  r.check("universal application", ok == 50, count_text(ok, 50));

  ok = 0;
  for (int i = 0; i < 50; ++i) {
    Natural e = pick();
    std::uint64_t n = rng() % 30;
    Natural p = pad(e), pp = pad(p);
    bool distinct = e < p && p < pp;
    ok += distinct && same_run(eval(e, n, fuel), eval(pp, n, fuel + 2 * kPadOverhead));
  }
  r.check("padding distinct and extensional", ok == 50, count_text(ok, 50));
}

// transformer e ↦ smn(h, e), assembled in-language
inline Natural smn_transformer(const Natural& h) {
  return encode(pr(lit(8), lit(h), lit(7), lit_code(id()), lit(encode(id()))));
}

inline void recursion(SuiteRecorder& r, const SuiteConfig&) {
  constexpr std::uint64_t fuel = 100000;
  const Prelude& p = Prelude::get();
  Natural succ_code = encode(succ());
  Natural h_self = encode(if0(call(p.parity, snd()), comp(univ(), pr(fst(), comp(succ(), snd()))), snd()));
  Natural h_split = encode(if0(call(p.parity, snd()), lit(0), mu(succ())));
  std::vector<std::pair<std::string, Natural>> transformers = {
      {"identity", encode(id())},
      {"constant succ", encode(lit(succ_code))},
      {"self constant", encode(lit_code(id()))},
      {"succ after self", encode(pr(lit(8), pr(lit(succ_code), id())))},
      {"self dependent parity", smn_transformer(h_self)},
      {"parity split", smn_transformer(h_split)},
  };
  for (auto& [name, f] : transformers) {
    std::uint64_t ok = 0;
    try {
      Natural e = fixed_point(f, fuel);
      EvalResult fe = eval(f, e, fuel);
      for (std::uint64_t n = 0; n <= 20 && fe.halted; ++n) ok += same_run(eval(e, n, fuel), eval(fe.value, n, fuel));
    } catch (const FixedPointError&) {
    }
    r.check("fixed point: " + name, ok == 21, count_text(ok, 21));
  }

  std::vector<std::pair<std::string, Term>> bodies = {
      {"self printing", fst()},
      {"succ ignoring self", comp(succ(), snd())},
      {"echo of the pair", id()},
      {"countdown through self", if0(snd(), lit(0), comp(univ(), pr(fst(), comp(pred(), snd()))))},
      {"diverges on zero", if0(snd(), mu(succ()), snd())},
  };
  for (auto& [name, b] : bodies) {
    Natural q = quine_with(encode(b));
    std::uint64_t ok = 0;
    for (std::uint64_t n = 0; n <= 20; ++n) ok += same_run(eval(q, n, fuel), eval(b, pair(q, n), fuel));
    r.check("quine: " + name, ok == 21, count_text(ok, 21));
  }

  Family fam = family_fixed_point(encode(fst()), 2);
  std::uint64_t ok = 0;
  for (std::uint64_t a = 0; a <= 50; ++a)
    for (std::uint64_t b = 0; b <= 50; ++b) {
      Natural A = tuple({a, b});
      EvalResult g = eval(fam.g, A, fam.index_steps);
      ok += g.halted && g.steps <= fam.index_steps && g.value == fam.index(A);
    }
  r.check("family totality on components <= 50", ok == 51 * 51, count_text(ok, 51 * 51));
}

// ---------------------------------------------------------------------------

struct CuratedSets {
  Natural everything = 0;
  Natural zero_in = encode(comp(univ(), pr(id(), zero())));
  Natural zero_one_in = encode(pr(comp(univ(), pr(id(), zero())), comp(univ(), pr(id(), lit(1)))));
  Natural evens = Programs::finite_set({0, 2, 4});
  Natural odds = Programs::finite_set({1, 3});
  Natural single0 = Programs::finite_set({0});
};

inline const CuratedSets& curated_sets() {
  static const CuratedSets s;
  return s;
}

inline void extension(SuiteRecorder& r, const SuiteConfig&) {
  const CuratedSets& S = curated_sets();
  const Natural& L = loop();
  struct Row {
    Natural a, b, I;
  };
  std::vector<Row> rows = {
      {S.evens, S.odds, S.everything}, {S.odds, L, S.everything},        {S.evens, S.odds, L},
      {L, S.evens, L},                 {S.evens, S.odds, S.zero_in},     {S.odds, S.evens, S.zero_in},
      {L, S.odds, S.zero_in},          {S.everything, L, S.zero_in},     {S.single0, S.odds, S.zero_one_in},
      {S.evens, S.everything, S.zero_one_in},
  };
  const std::uint64_t fuel = 200000;
  auto tri = [](std::uint64_t x) { return x * (x + 1) / 2; };
  std::uint64_t ok = 0;
  for (const Row& row : rows) {
    auto fam = lemma_ext_family(StagedSet{row.I});
    Natural e = fam.index(row.a, row.b);
    // first coarse stage at which A holds e, read directly
    std::optional<std::uint64_t> t;
    for (std::uint64_t m = 0; m <= 20 && !t; ++m)
      if (eval(row.I, e, tri(tri(m))).halted) t = m;
    bool row_ok = true;
    for (std::uint64_t n = 0; n < 7; ++n) {
      bool want = t ? (n <= tri(*t) && eval(row.a, n, tri(tri(*t))).halted) || eval(row.b, n, fuel).halted
                    : eval(row.a, n, fuel).halted;
      row_ok = row_ok && eval(e, n, 10 * fuel).halted == want;
    }
    ok += row_ok;
  }
  r.check("case table on 10 curated rows", ok == rows.size(), count_text(ok, rows.size()));

  // A = {e : 0 ∈ W_e} holds every index of ℕ and none of ∅
  StagedSet A{S.zero_in};
  std::uint64_t k = 67;
  auto U = lemma_ext_Uk(A, k, {S.everything, S.single0});
  auto covered = [](const std::vector<UpSet>& em, bool full) {
    for (const UpSet& u : em)
      if (full || u.set.empty()) return true;
    return false;
  };
  auto early = U.emit(1, 10000);
  r.check("item i: full set covered by stage 10^4", covered(early, true), std::to_string(early.size()) + " emissions");
  bool silent = true;
  for (std::uint64_t s : {10000, 100000}) silent = silent && !covered(U.emit(1, s), false);
  r.check("item ii: empty set uncovered through stage 10^5", silent);
}

// ---------------------------------------------------------------------------

inline const std::vector<std::uint64_t>& friedberg_points() {
  static const std::vector<std::uint64_t> pts = {0, 1, 2, 5, 12, 20, 23, 24, 30, 40};
  return pts;
}

// ground truth: least index outputting x, stable under fuel doubling
inline std::optional<std::uint64_t> stable_min_index(std::uint64_t x) {
  auto v = certified_oracle(ComplexityKind::MinIndex, {x, ""}, 2000, 20000);
  if (!v.stable || !v.value) return std::nullopt;
  return v.value;
}

inline bool friedberg_truth(std::uint64_t x, std::uint64_t c) { return bitlen(c) < CuratedFriedberg::h_of(x); }

inline void markov_to_k(SuiteRecorder& r, const SuiteConfig&) {
  const auto& F = curated_friedberg();
  std::vector<Natural> uni;
  for (auto x : friedberg_points()) uni.push_back(Programs::nbar_name(x));
  MarkovToK M(StagedSet{F.index_set}, SpaceId::NBar, uni);
  const std::uint64_t B = 1000000;
  for (auto x : friedberg_points()) {
    auto c = stable_min_index(x);
    if (!c) {
      r.check("nbar:" + std::to_string(x), false, "ground truth not fuel-stable");
      continue;
    }
    bool member = friedberg_truth(x, *c);
    auto name = point_filter(Point::nbar(x));
    if (member) {
      auto v = M.run(*c, name, B);
      r.check("nbar:" + std::to_string(x) + " member accepted within B", v.accepted,
              "k=" + std::to_string(*c) + " stage=" + std::to_string(v.stage));
    } else {
      auto v = M.run_at(*c, name, 10 * B);
      r.check("nbar:" + std::to_string(x) + " non-member silent through 10B", !v.accepted,
              "k=" + std::to_string(*c));
    }
  }
}

// ---------------------------------------------------------------------------

inline void difference(SuiteRecorder& r, const SuiteConfig&) {
  const CuratedSets& S = curated_sets();
  std::vector<Natural> uni = {loop(), S.single0, S.everything};
  std::vector<StagedSet> chain = {StagedSet{S.zero_in}, StagedSet{S.zero_one_in}};
  bool chain_ok = true;
  try {
    validate_chain(chain, uni, 10000);
  } catch (const std::invalid_argument&) {
    chain_ok = false;
  }
  r.check("chain decreasing on probes", chain_ok);
  auto fam = std::make_shared<const ChainFamily>(chain_family(chain));
  ChainOpenSets U(fam, uni, uni);
  for (std::uint64_t s : {1000, 10000}) {
    std::vector<std::vector<UpSet>> levels = {U.emit(1, s), U.emit(2, s)};
    std::uint64_t ok = 0;
    for (const Natural& E : uni) {
      auto member = [&](std::uint64_t x) { return eval(E, x, 10000).halted; };
      ok += in_difference(levels, member) == (member(0) && !member(1));
    }
    r.check("difference matches brute force at stage " + std::to_string(s), ok == uni.size(),
            count_text(ok, uni.size()));
  }
}

// ---------------------------------------------------------------------------

inline void friedberg(SuiteRecorder& r, const SuiteConfig&) {
  Type2Name zeros = point_filter(parse_point("cantor:0^w"));
  for (std::uint64_t k : {4, 6, 8}) {
    auto v = friedberg_cantor(k, zeros, 1000000);
    std::uint64_t window = std::uint64_t(1) << (k + 2);
    r.check("friedberg_cantor k=" + std::to_string(k), v.accepted && v.bit_queries <= window,
            "queries=" + std::to_string(v.bit_queries) + " window=" + std::to_string(window));
  }

  const std::uint64_t c0 = notsigma2_c0().value;
  r.check("c0 stable", notsigma2_c0().stable, "c0=" + std::to_string(c0));
  for (std::uint64_t k = c0; k <= c0 + 4; ++k) {
    auto v = notsigma2_semidecider(k, zeros, c0, 1000000);
    r.check("notsigma2 k=" + std::to_string(k), v.accepted && v.scanned == 2 * (k - c0) + 1,
            "scanned=" + std::to_string(v.scanned));
  }

  MarkovToK M(StagedSet{curated_friedberg().index_set}, SpaceId::NBar, {Programs::get().odd});
  auto fo = friedberg_order(M, 3, 1000000);
  bool increasing = fo.p.size() == 4;
  for (std::size_t i = 1; i < fo.p.size(); ++i) increasing = increasing && fo.p[i - 1] < fo.p[i];
  std::string ptext;
  for (auto v : fo.p) ptext += (ptext.empty() ? "" : ",") + std::to_string(v);
  r.check("friedberg_order thresholds increase", increasing, "p=" + ptext);
  std::uint64_t ok = 0;
  for (std::uint64_t j = 0; j < 10; ++j) {
    std::uint64_t x = j < 5 ? fo.p.back() + j : fo.p.front() + 7 * j;
    auto h = eval(fo.h, x, 100000);
    auto c = stable_min_index(x);
    bool inside = c && friedberg_truth(x, *c);
    bool tail = x >= fo.p.front();
    ok += h.halted && h.value == Natural(fo.h_of(x)) && (!tail || inside);
  }
  r.check("friedberg_order containment on 10 probes", ok == 10, count_text(ok, 10));

  std::vector<StagedSet> tails;
  for (int i = 0; i < 5; ++i) tails.push_back(StagedSet{tail_index_set(i)});
  AntiEnumeration AE(tails);
  for (std::size_t i = 0; i < 5; ++i) {
    auto w = AE.witness(i, 1000000);
    bool good = w.has_value() && w->replay();
    r.check("anti-enumeration witness for tail " + std::to_string(i), good, good ? "x=" + w->get("x") : "none");
  }
}

// ---------------------------------------------------------------------------

inline void complexity(SuiteRecorder& r, const SuiteConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 1);
  std::uint64_t ok = 0;
  for (int i = 0; i < 100; ++i) {
    std::uint64_t n = rng() % 40;
    std::optional<std::uint64_t> prev;
    bool mono = true;
    for (std::uint64_t s : {20, 60, 150, 400, 1000}) {
      auto c = c_upper(n, s);
      if (prev) mono = mono && c && *c <= *prev;
      if (c) prev = c;
    }
    auto want = certified_oracle(ComplexityKind::MinIndex, {n, ""}, 1000, 1000);
    ok += mono && want.stable && prev == want.value;
  }
  r.check("right-c.e. upper bounds on 100 seeded targets", ok == 100, count_text(ok, 100));

  const char* strings[] = {"0",    "1",      "01",     "10",      "000000", "111111", "0101",
                           "0011", "1100",   "010010", "0000001", "1000",   "0110",   "101",
                           "00100", "111000", "0001111", "10101",  "01110",  "1111"};
  ok = 0;
  std::uint64_t total = 0;
  for (const char* s : strings) {
    std::string u(s);
    auto whole = km_upper(u, 300);
    for (std::size_t len = 0; len < u.size(); ++len, ++total) {
      auto part = km_upper(u.substr(0, len), 300);
      ok += !whole || (part && *part <= *whole);
    }
  }
  r.check("km prefix monotonicity", ok == total, count_text(ok, total));

  // every ground-truth value the suites rely on
  ok = 0;
  total = 0;
  std::set<std::uint64_t> targets(friedberg_points().begin(), friedberg_points().end());
  for (std::uint64_t n : {7, 8, 19}) targets.insert(n);
  for (auto n : targets) {
    ++total;
    ok += stable_min_index(n).has_value();
  }
  ++total;
  ok += notsigma2_c0().stable;
  r.check("oracle fuel stability", ok == total, count_text(ok, total));
}

// ---------------------------------------------------------------------------

inline void adversaries(SuiteRecorder& r, const SuiteConfig&) {
  std::vector<std::pair<std::string, Converter>> cheats = {{"constant zero", constant_zero_converter()},
                                                           {"first consistent", first_consistent_converter()}};
  for (auto& [name, cand] : cheats) {
    auto out = converter_adversary(cand, 4096, 100000);
    const auto* w = std::get_if<RefutationWitness>(&out);
    bool good = w && w->replay() && w->replay();
    r.check("converter refuted: " + name, good, w ? w->get("kind") + " at t=" + w->get("t") : "budget report");
  }
  auto out = learner_adversary(seen_so_far_learner(), 5, 100000);
  const auto* w = std::get_if<RefutationWitness>(&out);
  bool good = w && std::stoull(w->get("distinct_guesses")) >= 5 && w->replay();
  r.check("learner forced through 5 guesses", good, w ? "stages " + w->get("stages") : "budget report");
}

// ---------------------------------------------------------------------------

inline void baire(SuiteRecorder& r, const SuiteConfig&) {
  auto coords = TCoordinates::sierp();
  {
    SierpToOB F(coords.entry(0).index);
    r.check("sierp_to_OB covers depth 3, values 5 for a divergent index", covers(F.emit(100000), 3, 5));
  }
  {
    SierpToOB F(coords.entry(1).index);
    auto em = F.emit(100000);
    std::uint64_t bad = 0;
    for (const auto& e : em) {
      bool compatible = true;
      for (std::size_t n = 0; n < e.u.size(); ++n) compatible = compatible && e.u[n] == coords.T(n);
      bad += compatible;
    }
    r.check("sierp_to_OB excludes T for a halting index", bad == 0 && !em.empty(),
            std::to_string(em.size()) + " emissions");
  }

  auto U = zero_partial_one_universe();
  {
    CantorToOBG G(point_filter(parse_point("cantor:0^w")), U);
    auto em = G.emit(100000);
    bool sound = true;
    for (const auto& e : em) sound = sound && (e.branch == "relative-accept" || !G.coords().compatible(e.u));
    r.check("cantor_to_OB_G on 0^w: certificates sound, space covered", sound && covers(em, 3, 5));
  }
  {
    CantorToOBG G(point_filter(parse_point("cantor:1^w")), U);
    auto em = G.emit(100000);
    bool sound = !em.empty();
    for (const auto& e : em) sound = sound && !G.coords().compatible(e.u);
    r.check("cantor_to_OB_G on 1^w: every emission misses T", sound);
  }

  // the partition argument read off direct runs: accept iff every program
  // compatible with x and total on the probe outputs only zeros
  auto H = U.exact_oracle();
  for (std::string x : {"cantor:0^w", "cantor:1^w"}) {
    std::uint64_t bit = x == "cantor:0^w" ? 0 : 1;
    bool any_c = false, want = true;
    for (const Natural& p : U.programs) {
      bool incompatible = false, partial = false, zeros = true;
      for (std::uint64_t n = 0; n < 64; ++n) {
        EvalResult e = eval(p, n, 100000);
        if (!e.halted) {
          partial = true;
          continue;
        }
        incompatible = incompatible || e.value != Natural(bit);
        zeros = zeros && e.value.is_zero();
      }
      if (incompatible || partial) continue;
      any_c = true;
      want = want && zeros;
    }
    want = want && any_c;
    auto v = relative_k(zero_sequence_decider(), H, point_filter(parse_point(x)), U.programs, U.partial_probe, 10000);
    r.check("relative_k with the exact oracle on " + x, v.accepted == want && !v.approximate,
            v.accepted ? "accepted" : "silent");
  }
}

}  // namespace suites

/// Declaration order is report order.
inline const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> s = {
      {"acceptability", "s-m-n, universal application, padding", suites::acceptability},
      {"recursion", "fixed points, quines, family totality", suites::recursion},
      {"extension", "case table and open sets from index sets", suites::extension},
      {"markov-to-k", "Friedberg set in the extended naturals", suites::markov_to_k},
      {"difference", "two-level difference sets", suites::difference},
      {"friedberg", "Cantor Friedberg set, non-Sigma2 scan, orders, anti-enumeration", suites::friedberg},
      {"complexity", "upper bounds and oracle stability", suites::complexity},
      {"adversaries", "converters and learners", suites::adversaries},
      {"baire", "open subsets of Baire space and the relative algorithm", suites::baire},
  };
  return s;
}

inline const Suite* find_suite(const std::string& id) {
  for (const Suite& s : all_suites())
    if (s.id == id) return &s;
  return nullptr;
}

inline SuiteResult run_suite(const Suite& s, const SuiteConfig& cfg) {
  SuiteRecorder r;
  try {
    s.body(r, cfg);
  } catch (const std::exception& e) {
    r.check("suite completed", false, e.what());
  }
  return {s.id, r.items()};
}

}  // namespace cwb
