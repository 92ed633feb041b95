#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "cwb/spaces.hpp"

namespace cwb {

// ---------------------------------------------------------------------------
// Coarse stages
//
// Self-referential programs search stages m = 0,1,2,... and give every clocked
// sub-run the fuel σ(m) = <<m,0>,0>, which is cheap to compute in-language and
// grows like m^4/8, and reads inputs up to <m,0>. A linear stage search would
// make nested clocks quadratic.

inline std::uint64_t stage_fuel(std::uint64_t m) {
  auto tri = [](unsigned __int128 x) { return x * (x + 1) / 2; };
  unsigned __int128 v = tri(tri(m));
  return v > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(v);
}

/// Inputs considered at coarse stage m: n <= <m,0>.
inline std::uint64_t stage_width(std::uint64_t m) { return m * (m + 1) / 2; }

/// Least m with σ(m) >= fuel.
inline std::uint64_t stage_of_fuel(std::uint64_t fuel) {
  std::uint64_t m = 0;
  while (stage_fuel(m) < fuel) ++m;
  return m;
}

/// W_e[m] in coarse stages: {n <= <m,0> : φ_e(n) halts within σ(m)}.
inline std::vector<std::uint64_t> coarse_view(const Natural& e, std::uint64_t m) {
  std::vector<std::uint64_t> out;
  Term t = decode(e);
  std::uint64_t f = stage_fuel(m);
  for (std::uint64_t n = 0; n <= stage_width(m); ++n)
    if (eval(t, n, f).halted) out.push_back(n);
  return out;
}

/// Coarse stage at which x enters A, searched up to `fuel`.
inline std::optional<std::uint64_t> coarse_entry(const StagedSet& A, const Natural& x, std::uint64_t fuel) {
  auto steps = A.entry(x, fuel);
  if (!steps) return std::nullopt;
  return stage_of_fuel(*steps);
}

namespace dsl {

inline T sigma(T m) { return pr(pr(std::move(m), zero()), zero()); }

/// 0 iff n ∈ W_e[m].
inline T in_coarse(T e, T n, T m) {
  T bounded = call(Prelude::get().leq, pr(n, pr(m, zero())));
  return both(std::move(bounded), clock_halted(std::move(e), n, sigma(m)));
}

/// 0 iff x ∈ A[σ(m)] for A = W_I.
inline T in_at(const Natural& I, T x, T m) { return clock_halted(lit(I), std::move(x), sigma(std::move(m))); }

/// 0 iff m = 0 or x ∉ A[σ(m-1)].
inline T not_before(const Natural& I, T x, T m) {
  return if0(m, lit(0), negate(clock_halted(lit(I), std::move(x), sigma(comp(pred(), m)))));
}

/// Component j of a right-nested tuple of the given arity.
inline T component(T tuple, std::size_t j, std::size_t arity) {
  T t = std::move(tuple);
  for (std::size_t i = 0; i < j; ++i) t = comp(snd(), t);
  return j + 1 == arity ? t : comp(fst(), t);
}

}  // namespace dsl

// ---------------------------------------------------------------------------
// Self-referential families over a chain A_0 ⊇ A_1 ⊇ ... ⊇ A_{N-1}

/// e(a_0..a_N) with
///   W_e = W_{a_0}[t_0] ∪ ... ∪ W_{a_{i-1}}[t_{i-1}] ∪ W_{a_i}
/// where e ∈ A_j[at t_j] for j < i and e ∉ A_i (i = N when e is in all).
/// With N = 1 this is the two-case table e(a,b).
struct ChainFamily {
  std::vector<StagedSet> chain;
  Family fam;

  std::size_t levels() const { return chain.size(); }
  Natural index(const std::vector<Natural>& abar) const {
    if (abar.size() != chain.size() + 1) throw std::invalid_argument("tuple arity must be chain length + 1");
    Natural acc = abar.back();
    for (std::size_t i = abar.size() - 1; i-- > 0;) acc = pair(abar[i], acc);
    return fam.index(acc);
  }
  Natural index(const Natural& a, const Natural& b) const { return index(std::vector<Natural>{a, b}); }

  /// The case the table predicts for e, with the coarse entry stages seen
  /// within `fuel` per membership check.
  struct Case {
    std::size_t i = 0;                // first level e is not (yet) in
    std::vector<std::uint64_t> t;     // t_0..t_{i-1}
  };
  Case predict(const Natural& e, std::uint64_t fuel) const {
    Case c;
    for (const StagedSet& A : chain) {
      auto t = coarse_entry(A, e, fuel);
      if (!t) break;
      c.t.push_back(*t);
      ++c.i;
    }
    return c;
  }

  /// Membership of n in W_e as predicted by the table (each W_{a} is tested
  /// with `fuel`; the uncapped component uses it directly).
  bool predicted_member(const std::vector<Natural>& abar, std::uint64_t n, std::uint64_t fuel) const {
    Case c = predict(index(abar), fuel);
    for (std::size_t j = 0; j < c.i; ++j) {
      auto w = coarse_view(abar[j], c.t[j]);
      if (std::binary_search(w.begin(), w.end(), n)) return true;
    }
    return eval(abar[c.i], n, fuel).halted;
  }
};

inline ChainFamily chain_family(std::vector<StagedSet> chain) {
  using namespace dsl;
  if (chain.empty()) throw std::invalid_argument("empty chain");
  std::size_t N = chain.size();
  // the Mu body sees <input, y>; input = <own, <abar, n>>
  T X = fst(), y = snd();
  T m_cap = N == 1 ? y : comp(fst(), y);
  T m = N == 1 ? y : comp(snd(), y);
  T own = comp(fst(), X), abar = comp(fst(), snd(), X), n = comp(snd(), snd(), X);
  std::optional<T> cond;
  for (std::size_t j = N + 1; j-- > 0;) {
    T a_j = component(abar, j, N + 1);
    T d = j < N ? both(in_coarse(a_j, n, m_cap), not_before(chain[j].e, own, m_cap)) : in_coarse(a_j, n, m);
    for (std::size_t l = j; l-- > 0;) d = both(in_at(chain[l].e, own, m), d);
    cond = cond ? either(d, *cond) : d;
  }
  Natural body = encode(mu(*cond));
  return {std::move(chain), family_fixed_point(body, N + 1)};
}

/// Throws unless A_{j+1} ⊆ A_j on every probe, each membership read at `fuel`.
inline void validate_chain(const std::vector<StagedSet>& chain, const std::vector<Natural>& probes, std::uint64_t fuel) {
  for (std::size_t j = 0; j + 1 < chain.size(); ++j)
    for (const Natural& e : probes)
      if (chain[j + 1].contains(e, fuel) && !chain[j].contains(e, fuel))
        throw std::invalid_argument("chain is not decreasing at level " + std::to_string(j + 1));
}

/// e(a,b) of the two-case table for one c.e. set A.
inline ChainFamily lemma_ext_family(const StagedSet& A) { return chain_family({A}); }

// ---------------------------------------------------------------------------
// Candidate lists

/// Indices 0..b_k, which contain an index of every c.e. set of complexity <= k.
inline std::vector<Natural> index_candidates(ComplexityKind kind, std::uint64_t k) {
  Natural b = index_bound_from_k(kind, k);
  if (!b.is_small() || b.u64() > 1000000) throw std::invalid_argument("candidate list too long");
  std::vector<Natural> out;
  for (std::uint64_t i = 0; i <= b.u64(); ++i) out.push_back(i);
  return out;
}

namespace detail {

// <c,i> ↦ halts iff i is in the ℕ̄ filter of φ_c(0)
inline const Natural& nbar_output_name() {
  static const Natural q = [] {
    using namespace dsl;
    const Prelude& pre = Prelude::get();
    const Programs& lib = Programs::get();
    T loop_t = mu(succ());
    T v = comp(univ(), pr(fst(), zero())), i = snd();
    T even = if0(call(pre.eq, pr(i, call(pre.add, pr(v, v)))), lit(0), loop_t);
    T odd = if0(call(pre.leq, pr(call(lib.half, i), v)), lit(0), loop_t);
    return encode(if0(call(pre.parity, i), even, odd));
  }();
  return q;
}

}  // namespace detail

/// A finite list of Markov names containing a name of every point whose
/// complexity is at most k; candidates that name nothing are harmless.
///
/// Point complexity is the complexity of a program for the point itself
/// (the output program for ℕ̄, the sequence program for Cantor and Baire,
/// an enumeration index for P(ℕ)); the name is computed from it.
inline std::vector<Natural> name_candidates(SpaceId space, ComplexityKind kind, std::uint64_t k) {
  const Programs& lib = Programs::get();
  if (space == SpaceId::Sierp) return {lib.sierp_bot, lib.sierp_top};
  std::vector<Natural> out;
  for (const Natural& c : index_candidates(kind, k)) {
    switch (space) {
      case SpaceId::NBar: out.push_back(smn(detail::nbar_output_name(), c)); break;
      case SpaceId::Cantor: out.push_back(Programs::cantor_name(c)); break;
      case SpaceId::Baire: out.push_back(Programs::baire_name(c)); break;
      case SpaceId::PowerN: out.push_back(Programs::pown_name(c)); break;
      case SpaceId::Sierp: break;
    }
  }
  // ∞ has no output program; its canonical name is always a candidate
  if (space == SpaceId::NBar) out.push_back(lib.odd);
  return out;
}

// ---------------------------------------------------------------------------
// Emission of ↑(W_{a_0}[t_0] ∪ ... ∪ W_{a_i}[t_i]) into U^{i+1}

/// One emitted up-set: the finite set F (elements of ℕ, i.e. basis codes of
/// the embedded space) and the fuel stage at which it appeared.
struct UpSet {
  std::vector<Natural> a;  // a_0..a_i
  std::vector<std::uint64_t> t;
  std::vector<std::uint64_t> set;
  std::uint64_t stage = 0;

  /// Basis code of ↑F in P(ℕ).
  Natural code() const { return pown_code(set); }
  bool inside(const std::vector<std::uint64_t>& sorted) const {
    return std::includes(sorted.begin(), sorted.end(), set.begin(), set.end());
  }
};

/// Entry stages of family members into the chain sets, shared by every
/// U_k built on the same family (members do not depend on k).
class EntryCache {
 public:
  explicit EntryCache(std::shared_ptr<const ChainFamily> fam) : fam_(std::move(fam)) {}

  /// Entry steps of e(ā) into A_level within `fuel`.
  std::optional<std::uint64_t> entry(std::size_t level, const std::vector<Natural>& abar, std::uint64_t fuel) {
    Natural e = fam_->index(abar);
    auto key = std::make_pair(level, e);
    auto it = slots_.find(key);
    if (it != slots_.end()) {
      if (it->second.steps) return *it->second.steps <= fuel ? it->second.steps : std::nullopt;
      if (it->second.tried >= fuel) return std::nullopt;
    }
    auto r = fam_->chain[level].entry(e, fuel);
    auto& slot = slots_[key];
    slot.steps = r;
    slot.tried = std::max(slot.tried, fuel);
    ++checks_;
    return r;
  }

  /// coarse_view(a, t), memoised.
  const std::vector<std::uint64_t>& view(const Natural& a, std::uint64_t t) {
    auto key = std::make_pair(a.hash(), t);
    auto it = views_.find(key);
    if (it == views_.end() || it->second.first != a) it = views_.insert_or_assign(key, std::make_pair(a, coarse_view(a, t))).first;
    return it->second.second;
  }

  const ChainFamily& family() const { return *fam_; }
  std::shared_ptr<const ChainFamily> family_ptr() const { return fam_; }
  std::uint64_t checks() const { return checks_; }

 private:
  struct Slot {
    std::optional<std::uint64_t> steps;
    std::uint64_t tried = 0;
  };
  struct KeyLess {
    bool operator()(const std::pair<std::size_t, Natural>& x, const std::pair<std::size_t, Natural>& y) const {
      if (x.first != y.first) return x.first < y.first;
      if (x.second.hash() != y.second.hash()) return x.second.hash() < y.second.hash();
      return x.second != y.second && x.second < y.second;
    }
  };
  std::shared_ptr<const ChainFamily> fam_;
  std::map<std::pair<std::size_t, Natural>, Slot, KeyLess> slots_;
  std::map<std::pair<std::size_t, std::uint64_t>, std::pair<Natural, std::vector<std::uint64_t>>> views_;
  std::uint64_t checks_ = 0;
};

/// Staged open sets U^1_k..U^N_k of the chain construction; U_k of the
/// two-case table is level 1 of a one-set chain.
///
/// The a-order lists `universe` first and then the naturals; at fuel stage s
/// the first |universe| + width(s) entries are considered. Tuple tails range
/// over the candidate list.
class ChainOpenSets {
 public:
  ChainOpenSets(std::shared_ptr<EntryCache> cache, std::vector<Natural> universe, std::vector<Natural> candidates)
      : cache_(std::move(cache)), universe_(std::move(universe)), cands_(std::move(candidates)) {}
  ChainOpenSets(std::shared_ptr<const ChainFamily> fam, std::vector<Natural> universe, std::vector<Natural> candidates)
      : ChainOpenSets(std::make_shared<EntryCache>(std::move(fam)), std::move(universe), std::move(candidates)) {}

  static std::uint64_t naturals_width(std::uint64_t s) { return bitlen(s) / 2; }

  Natural a_at(std::uint64_t pos) const {
    return pos < universe_.size() ? universe_[pos] : Natural(pos - universe_.size());
  }
  std::uint64_t width(std::uint64_t s) const { return universe_.size() + naturals_width(s); }

  /// Emissions of level `level` (1-based) by fuel stage s, in a-order.
  std::vector<UpSet> emit(std::size_t level, std::uint64_t s) {
    if (level == 0 || level > family().levels()) throw std::invalid_argument("no such level");
    std::vector<UpSet> out;
    std::vector<Natural> prefix;
    std::vector<std::uint64_t> ts;
    walk(level, 0, prefix, ts, {}, 0, s, out);
    return out;
  }

  std::uint64_t checks() const { return cache_->checks(); }
  const ChainFamily& family() const { return cache_->family(); }
  const std::vector<Natural>& candidates() const { return cands_; }

 private:
  // every tail over the candidate list puts e(prefix, tail) into A_lvl
  bool all_enter(std::size_t lvl, const std::vector<Natural>& prefix, std::uint64_t s, std::uint64_t& t_max,
                 std::uint64_t& steps_max) {
    std::size_t tail = family().levels() + 1 - prefix.size();
    std::vector<std::size_t> idx(tail, 0);
    for (;;) {
      std::vector<Natural> abar = prefix;
      for (std::size_t i : idx) abar.push_back(cands_[i]);
      auto r = cache_->entry(lvl, abar, s);
      if (!r) return false;
      t_max = std::max(t_max, stage_of_fuel(*r));
      steps_max = std::max(steps_max, *r);
      std::size_t p = tail;
      while (p > 0) {
        if (++idx[p - 1] < cands_.size()) break;
        idx[p - 1] = 0;
        --p;
      }
      if (p == 0) return true;
    }
  }

  void walk(std::size_t level, std::size_t depth, std::vector<Natural>& prefix, std::vector<std::uint64_t>& ts,
            std::vector<std::uint64_t> acc, std::uint64_t stage, std::uint64_t s, std::vector<UpSet>& out) {
    for (std::uint64_t pos = 0; pos < width(s); ++pos) {
      Natural a = a_at(pos);
      prefix.push_back(a);
      std::uint64_t t = 0, steps = stage;
      if (all_enter(depth, prefix, s, t, steps)) {
        ts.push_back(t);
        std::vector<std::uint64_t> set = acc;
        for (auto x : cache_->view(a, t)) set.push_back(x);
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        if (depth + 1 == level)
          out.push_back({prefix, ts, set, steps});
        else
          walk(level, depth + 1, prefix, ts, set, steps, s, out);
        ts.pop_back();
      }
      prefix.pop_back();
    }
  }

  std::shared_ptr<EntryCache> cache_;
  std::vector<Natural> universe_;
  std::vector<Natural> cands_;
};

/// U_k of the two-case table over P(ℕ) with b ranging over 0..b_k.
inline ChainOpenSets lemma_ext_Uk(const StagedSet& A, std::uint64_t k, std::vector<Natural> universe = {},
                                  ComplexityKind kind = ComplexityKind::MinIndex) {
  return ChainOpenSets(std::make_shared<const ChainFamily>(lemma_ext_family(A)), std::move(universe),
                       index_candidates(kind, k));
}

/// E ∈ D_N(U^1..U^N) = (U^1∖U^2) ∪ (U^3∖U^4) ∪ ... for a set E known
/// through a membership predicate on the finitely many elements involved.
template <class Member>
bool in_difference(const std::vector<std::vector<UpSet>>& levels, Member&& member) {
  auto covered = [&](const std::vector<UpSet>& em) {
    for (const UpSet& u : em) {
      bool ok = true;
      for (auto x : u.set) ok = ok && member(x);
      if (ok) return true;
    }
    return false;
  };
  bool in = false;
  for (std::size_t i = 0; i < levels.size(); i += 2) {
    bool pos = covered(levels[i]);
    bool neg = i + 1 < levels.size() && covered(levels[i + 1]);
    in = in || (pos && !neg);
  }
  return in;
}

// ---------------------------------------------------------------------------
// Semideciders

struct Verdict {
  bool accepted = false;
  std::uint64_t stage = 0;    // fuel stage of the accepting emission
  std::uint64_t queries = 0;  // name entries read
  std::optional<UpSet> via;
};

/// Reads a Type-2 name lazily and remembers what it has seen.
class NameReader {
 public:
  explicit NameReader(const Type2Name& name) : name_(name) {}
  void read_to(std::uint64_t count) {
    while (read_ < count) seen_.insert(name_.nth(read_++));
  }
  bool seen(std::uint64_t code) const { return seen_.count(Natural(code)) > 0; }
  std::uint64_t queries() const { return read_; }

 private:
  const Type2Name& name_;
  std::uint64_t read_ = 0;
  struct Less {
    bool operator()(const Natural& a, const Natural& b) const {
      if (a.is_small() && b.is_small()) return a.u64() < b.u64();
      return a.hash() != b.hash() ? a.hash() < b.hash() : (a != b && a < b);
    }
  };
  std::set<Natural, Less> seen_;
};

/// Fuel stages tried by budgeted semideciders: 2^10, 2^11, ..., then the budget.
inline std::vector<std::uint64_t> stage_ladder(std::uint64_t budget) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 1024; s < budget; s *= 2) out.push_back(s);
  out.push_back(budget);
  return out;
}

/// K-mode semidecider obtained from an index set I of a Markov-semidecidable
/// set: accepts (k, name) once some ↑W_a[t] in U_k lies inside the filter.
class MarkovToK {
 public:
  MarkovToK(StagedSet I, SpaceId space, std::vector<Natural> universe,
            ComplexityKind kind = ComplexityKind::MinIndex)
      : cache_(std::make_shared<EntryCache>(std::make_shared<const ChainFamily>(lemma_ext_family(I)))),
        space_(space),
        universe_(std::move(universe)),
        kind_(kind) {}

  ChainOpenSets& open_set(std::uint64_t k) {
    auto it = sets_.find(k);
    if (it == sets_.end())
      it = sets_.emplace(k, ChainOpenSets(cache_, universe_, name_candidates(space_, kind_, k))).first;
    return it->second;
  }

  /// Name entries read by fuel stage s.
  static std::uint64_t read_limit(std::uint64_t s) { return std::min<std::uint64_t>(s / 16, 1 << 16); }

  Verdict run(std::uint64_t k, const Type2Name& name, std::uint64_t budget) {
    NameReader reader(name);
    for (std::uint64_t s : stage_ladder(budget))
      if (auto v = check(k, reader, s)) return *v;
    return {false, budget, reader.queries(), std::nullopt};
  }

  /// Whether stage s alone accepts; emissions grow with s, so silence at s
  /// means silence at every earlier stage.
  Verdict run_at(std::uint64_t k, const Type2Name& name, std::uint64_t s) {
    NameReader reader(name);
    if (auto v = check(k, reader, s)) return *v;
    return {false, s, reader.queries(), std::nullopt};
  }

  const ChainFamily& family() const { return cache_->family(); }
  std::uint64_t checks() const { return cache_->checks(); }

 private:
  std::optional<Verdict> check(std::uint64_t k, NameReader& reader, std::uint64_t s) {
    reader.read_to(read_limit(s));
    for (const UpSet& u : open_set(k).emit(1, s)) {
      bool inside = true;
      for (auto x : u.set) inside = inside && reader.seen(x);
      if (inside) return Verdict{true, s, reader.queries(), u};
    }
    return std::nullopt;
  }

  std::shared_ptr<EntryCache> cache_;
  SpaceId space_;
  std::vector<Natural> universe_;
  ComplexityKind kind_;
  std::map<std::uint64_t, ChainOpenSets> sets_;
};

/// Π⁰₂ hull: the open sets U_k through the filter embedding; A = ⋂_k U_k on
/// computable points.
class Pi02Hull {
 public:
  Pi02Hull(StagedSet I, SpaceId space, std::vector<Natural> universe,
           ComplexityKind kind = ComplexityKind::MinIndex)
      : inner_(std::move(I), space, std::move(universe), kind) {}

  /// Basis codes of P(ℕ) (up-sets of filter codes) emitted into U_k by stage s.
  std::vector<UpSet> emit(std::uint64_t k, std::uint64_t s) { return inner_.open_set(k).emit(1, s); }

  /// Whether the point lies in U_k by stage s (filter codes checked exactly).
  bool contains(std::uint64_t k, const Point& p, std::uint64_t s) {
    for (const UpSet& u : emit(k, s)) {
      bool ok = true;
      for (auto x : u.set) ok = ok && in_basis(p, x);
      if (ok) return true;
    }
    return false;
  }

 private:
  MarkovToK inner_;
};

}  // namespace cwb
