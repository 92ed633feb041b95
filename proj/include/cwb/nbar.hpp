#pragma once

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

#include "cwb/structure.hpp"
#include "cwb/witness.hpp"

namespace cwb {

// ---------------------------------------------------------------------------
// Open subsets of ℕ̄ given by finitely many basic codes

/// Index set of the Markov names whose filter meets `codes`: the name halts
/// on one of them within σ(m) for some m.
inline Natural meets_codes(const std::vector<std::uint64_t>& codes) {
  using namespace dsl;
  if (codes.empty()) return encode(mu(succ()));
  T e = fst(), m = snd();
  std::optional<T> cond;
  for (std::size_t i = codes.size(); i-- > 0;) {
    T c = clock_halted(e, lit(codes[i]), sigma(m));
    cond = cond ? either(c, *cond) : c;
  }
  return encode(mu(*cond));
}

/// Index set of the tail [m,∞].
inline Natural tail_index_set(std::uint64_t m) { return meets_codes({2 * m + 1}); }

/// Lists W_e in order of appearance, with fuel doubling up to 2^24; a finite
/// domain is padded by repeating its last element.
inline Type2Name markov_listing(const Natural& e) {
  auto seen = std::make_shared<std::vector<Natural>>();
  auto fuel = std::make_shared<std::uint64_t>(32);
  return {[e, seen, fuel](std::uint64_t j) {
            while (seen->size() <= j && *fuel < (1ULL << 24)) {
              *fuel *= 2;
              for (auto x : we_stage(e, *fuel))
                if (std::find(seen->begin(), seen->end(), Natural(x)) == seen->end()) seen->push_back(x);
            }
            if (seen->empty()) throw std::runtime_error("empty domain within the listing fuel");
            return j < seen->size() ? (*seen)[j] : seen->back();
          },
          "markov"};
}

/// A name of an ℕ̄ point (∞ uses the compact canonical name).
inline Natural nbar_point_name(const Point& p) { return markov_name_of(p).e; }

// ---------------------------------------------------------------------------
// The curated Friedberg set
//
// h(n) = 2 below 24 and ⌊log₂ n⌋ + 4 from 24 on. With K the bit length of
// the least index, K(n) < 2 only for n = 0,1, while the literal program gives
// K(n) <= ⌊log₂ n⌋ + 3 from 24 on. So {x : K(x) < h(x)} = {0,1} ∪ [24,∞],
// which is the open set with codes {0, 2, 49}.

struct CuratedFriedberg {
  Natural h;
  Natural index_set;
  std::vector<std::uint64_t> codes{0, 2, 49};

  static std::uint64_t h_of(std::uint64_t n) { return n < 24 ? 2 : 63 - __builtin_clzll(n) + 4; }
};

inline const CuratedFriedberg& curated_friedberg() {
  static const CuratedFriedberg f = [] {
    using namespace dsl;
    const Prelude& pre = Prelude::get();
    T self = fst(), n = snd();
    Natural ilog2 = quine_with(encode(
        if0(call(pre.leq, pr(n, lit(1))), lit(0), comp(succ(), univ(), pr(self, call(Programs::get().half, n))))));
    T big = comp(succ(), succ(), succ(), succ(), call(ilog2, id()));
    CuratedFriedberg c;
    c.h = encode(if0(call(pre.leq, pr(lit(24), id())), big, lit(2)));
    c.index_set = meets_codes(c.codes);
    return c;
  }();
  return f;
}

// ---------------------------------------------------------------------------
// Orders from Markov-semidecidable sets containing ∞

/// p(0..K) and the order h(n) = min{i : p(i) > n}, with K+1 beyond p(K).
struct FriedbergOrder {
  std::vector<std::uint64_t> p;
  Natural h;

  std::uint64_t h_of(std::uint64_t n) const {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] > n) return i;
    return p.size();
  }
};

struct OrderStalled : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// p(k) is read off the emission that makes the K-mode semidecider accept
/// (k, name of ∞): that emission is ↑{[j,∞] : ...}, so [max j, ∞] ∩ {C <= k}
/// lies in A. The values are made strictly increasing.
inline FriedbergOrder friedberg_order(MarkovToK& M, std::uint64_t k_max, std::uint64_t budget) {
  FriedbergOrder out;
  Type2Name inf = point_filter(Point::nbar(std::nullopt));
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    Verdict v = M.run(k, inf, budget);
    if (!v.accepted) throw OrderStalled("∞ not accepted at k=" + std::to_string(k) + " within budget");
    std::uint64_t p = 0;
    for (auto c : v.via->set) p = std::max<std::uint64_t>(p, c / 2);
    if (!out.p.empty()) p = std::max(p, out.p.back() + 1);
    out.p.push_back(p);
  }
  using namespace dsl;
  // value table: h on n < p(K), K+1 beyond
  std::uint64_t limit = out.p.back();
  T chain = lit(out.p.size());
  for (std::uint64_t n = limit; n-- > 0;) {
    // input is n - (position), so position n sees 0
    chain = if0(id(), lit(out.h_of(n)), comp(chain, pred()));
  }
  out.h = encode(chain);
  return out;
}

// ---------------------------------------------------------------------------
// Friedberg sets of ℕ̄ from a computable order

/// {x ∈ ℕ̄ : K(x) < h(x)} as a semidecider over names.
class NBarFriedberg {
 public:
  explicit NBarFriedberg(Natural h, std::uint64_t h_fuel = 1000000) : h_(std::move(h)), fuel_(h_fuel) {}

  std::optional<std::uint64_t> h(std::uint64_t n) const {
    auto r = eval(h_, n, fuel_);
    if (!r.halted || !r.value.is_small()) return std::nullopt;
    return r.value.u64();
  }

  /// N = min{n : h(n) > m}, by doubling then bisection; none if it lies
  /// beyond 2^62 or h fails to halt.
  std::optional<std::uint64_t> threshold(std::uint64_t m) const {
    std::uint64_t hi = 1;
    for (;;) {
      auto v = h(hi);
      if (!v) return std::nullopt;
      if (*v > m) break;
      if (hi >= (1ULL << 62)) return std::nullopt;
      hi *= 2;
    }
    auto v0 = h(0);
    if (!v0) return std::nullopt;
    if (*v0 > m) return 0;
    std::uint64_t lo = 0;  // h(lo) <= m < h(hi)
    while (hi - lo > 1) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      auto v = h(mid);
      if (!v) return std::nullopt;
      (*v > m ? hi : lo) = mid;
    }
    return hi;
  }

  /// K-mode: m bounds the point's complexity.
  Verdict run(std::uint64_t m, const Type2Name& name, std::uint64_t budget) const {
    auto N = threshold(m);
    std::vector<std::uint64_t> small;
    std::uint64_t read = 0;
    for (std::uint64_t s : stage_ladder(budget)) {
      if (!N) break;
      std::uint64_t want = MarkovToK::read_limit(s);
      for (; read < want; ++read) {
        Natural c = name.nth(read);
        if (!c.is_small() || c.u64() >= 2 * *N) return {true, s, read + 1, std::nullopt};
        if (c.u64() % 2 == 0) small.push_back(c.u64() / 2);
      }
      std::sort(small.begin(), small.end());
      small.erase(std::unique(small.begin(), small.end()), small.end());
      for (auto n : small) {
        auto k = k_upper(n, stage_within(s));
        auto hn = h(n);
        if (k && hn && *k < *hn) return {true, s, read, std::nullopt};
      }
    }
    return {false, budget, read, std::nullopt};
  }

  /// Markov mode: the bound is derived from the index as max(bitlen(e), K(∞)).
  Verdict run_markov(const Natural& e, std::uint64_t budget) const {
    std::uint64_t m = std::max<std::uint64_t>(e.bit_length(), infinity_constants().k_inf);
    return run(m, markov_listing(e), budget);
  }

 private:
  Natural h_;
  std::uint64_t fuel_;
};

// ---------------------------------------------------------------------------
// No computable list exhausts the Markov-semidecidable subsets of ℕ̄

/// Increasing f_i into A_i: f_i(k) is found by dovetailing membership of
/// the singleton names above f_i(k-1).
class IncreasingSelector {
 public:
  explicit IncreasingSelector(StagedSet I) : I_(std::move(I)) {}

  std::optional<std::uint64_t> at(std::uint64_t k, std::uint64_t budget) {
    while (f_.size() <= k) {
      std::uint64_t lo = f_.empty() ? 0 : f_.back() + 1;
      auto next = search(lo, budget);
      if (!next) return std::nullopt;
      f_.push_back(*next);
    }
    return f_[k];
  }

 private:
  std::optional<std::uint64_t> search(std::uint64_t lo, std::uint64_t budget) {
    for (std::uint64_t fuel = 256, width = 1; fuel <= budget; fuel *= 2, ++width)
      for (std::uint64_t n = lo; n < lo + width; ++n)
        if (I_.contains(Programs::nbar_name(n), fuel)) return n;
    return std::nullopt;
  }

  StagedSet I_;
  std::vector<std::uint64_t> f_;
};

/// A = {x : f(C(x)) <= x} with f(k) = max(f_0(k),...,f_k(k)) + 1 escapes
/// every A_i of the list; witnesses are points of A_i outside A.
class AntiEnumeration {
 public:
  explicit AntiEnumeration(std::vector<StagedSet> list) : list_(std::move(list)) {
    for (const auto& I : list_) sel_.emplace_back(I);
  }

  std::size_t size() const { return sel_.size(); }

  std::optional<std::uint64_t> f(std::uint64_t k, std::uint64_t budget) {
    std::uint64_t best = 0;
    for (std::size_t i = 0; i < sel_.size() && i <= k; ++i) {
      auto v = sel_[i].at(k, budget);
      if (!v) return std::nullopt;
      best = std::max(best, *v);
    }
    return best + 1;
  }

  /// Whether ∞ is seen in A_i within the budget.
  bool contains_infinity(std::size_t i, std::uint64_t budget) const {
    return list_[i].contains(Programs::get().odd, budget);
  }

  /// K-mode semidecider of A with complexity bound m.
  Verdict run(std::uint64_t m, const Type2Name& name, std::uint64_t budget) {
    auto fm = f(m, budget);
    std::uint64_t read = 0;
    std::vector<std::uint64_t> small;
    for (std::uint64_t s : stage_ladder(budget)) {
      for (std::uint64_t want = MarkovToK::read_limit(s); read < want; ++read) {
        Natural c = name.nth(read);
        if (fm && (!c.is_small() || c.u64() >= 2 * *fm)) return {true, s, read + 1, std::nullopt};
        if (c.is_small() && c.u64() % 2 == 0) small.push_back(c.u64() / 2);
      }
      std::sort(small.begin(), small.end());
      small.erase(std::unique(small.begin(), small.end()), small.end());
      for (auto n : small) {
        auto c = c_upper(n, stage_within(s));
        if (!c) continue;
        auto fc = f(*c, budget);
        if (fc && *fc <= n) return {true, s, read, std::nullopt};
      }
    }
    return {false, budget, read, std::nullopt};
  }

  /// For list entry i: x = f_i(k) with f(C(x)) > x, so x ∈ A_i but x ∉ A.
  /// C(x) comes from the exhaustive oracle below the literal program of x,
  /// checked for fuel stability.
  std::optional<RefutationWitness> witness(std::size_t i, std::uint64_t budget, std::uint64_t max_k = 64) {
    for (std::uint64_t k = i; k <= max_k; ++k) {
      auto x = sel_[i].at(k, budget);
      if (!x) return std::nullopt;
      auto cv = certified(*x, budget);
      if (!cv) continue;
      auto fc = f(*cv, budget);
      if (!fc || *fc <= *x) continue;
      RefutationWitness w;
      w.clause = "A_" + std::to_string(i) + " = A";
      w.note("i", std::to_string(i));
      w.note("k", std::to_string(k));
      w.note("x", std::to_string(*x));
      w.note("C(x)", std::to_string(*cv));
      w.note("f(C(x))", std::to_string(*fc));
      StagedSet I = list_[i];
      std::uint64_t xv = *x, fv = *fc, c = *cv;
      w.replay = [I, xv, fv, c, budget] {
        bool in_ai = I.contains(Programs::nbar_name(xv), budget);
        auto again = exact_oracle(ComplexityKind::MinIndex, {xv, ""}, lit_bound(xv), oracle_fuel(budget));
        return in_ai && again && *again == c && fv > xv;
      };
      return w;
    }
    return std::nullopt;
  }

  static std::uint64_t lit_bound(std::uint64_t x) { return encode(Term::lit(x)).u64(); }
  static std::uint64_t oracle_fuel(std::uint64_t budget) { return std::max<std::uint64_t>(1000, budget / 100); }

 private:
  std::optional<std::uint64_t> certified(std::uint64_t x, std::uint64_t budget) const {
    auto v = certified_oracle(ComplexityKind::MinIndex, {x, ""}, lit_bound(x), oracle_fuel(budget));
    if (!v.stable) return std::nullopt;
    return v.value;
  }

  std::vector<StagedSet> list_;
  std::vector<IncreasingSelector> sel_;
};

}  // namespace cwb
