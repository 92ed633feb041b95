#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cwb/lemma3.hpp"

namespace cwb {

// ---------------------------------------------------------------------------
// Dense subsequences of Markov-semidecidable sets

/// Decidable membership of the configured dense sequence in basic sets:
/// a total program on <j,c> returning 0 iff x_j ∈ B_c, and the same test
/// in C++. Available for ℕ̄ (x_j = j) and 𝕊 (x_j = ⊤).
struct DenseMembership {
  SpaceId space;
  Natural program;
  std::function<bool(std::uint64_t j, std::uint64_t c)> member;
};

inline DenseMembership dense_membership(SpaceId space) {
  using namespace dsl;
  const Prelude& pre = Prelude::get();
  switch (space) {
    case SpaceId::NBar: {
      static const Natural prog = [&] {
        T j = fst(), c = snd();
        T half_c = call(Programs::get().half, c);
        return encode(if0(call(pre.parity, c), call(pre.eq, pr(j, half_c)), call(pre.leq, pr(half_c, j))));
      }();
      return {space, prog, [](std::uint64_t j, std::uint64_t c) { return c % 2 ? c / 2 <= j : c / 2 == j; }};
    }
    case SpaceId::Sierp: {
      static const Natural prog = encode(call(pre.leq, pr(snd(), lit(1))));
      return {space, prog, [](std::uint64_t, std::uint64_t c) { return c <= 1; }};
    }
    default: throw std::invalid_argument(std::string("no decidable dense membership for ") + space_name(space));
  }
}

/// One point produced by the dense family: e(a) entered A at coarse stage t
/// and now names x_J, the first dense point inside every B_c with c ∈ W_a[t].
struct DenseEmission {
  Natural a;
  std::uint64_t t = 0;
  std::uint64_t j = 0;
  Point point;
  std::uint64_t stage = 0;
};

/// The family e(a) with W_{e(a)} = W_a while e(a) ∉ A, and the filter of a
/// dense point once e(a) ∈ A. A is nonempty iff some e(a) enters, and the
/// points it names are dense in A.
class DenseSequence {
 public:
  DenseSequence(StagedSet I, SpaceId space, std::vector<Natural> universe)
      : I_(std::move(I)), dm_(dense_membership(space)), universe_(std::move(universe)) {
    fam_ = family_fixed_point(body(), 1);
  }

  Natural index(const Natural& a) const { return fam_.index(a); }
  const Family& family() const { return fam_; }

  Natural a_at(std::uint64_t pos) const {
    return pos < universe_.size() ? universe_[pos] : Natural(pos - universe_.size());
  }
  std::uint64_t width(std::uint64_t s) const { return universe_.size() + ChainOpenSets::naturals_width(s); }

  /// Points named by entered family members by fuel stage s, in a-order.
  std::vector<DenseEmission> emit(std::uint64_t s) {
    std::vector<DenseEmission> out;
    for (std::uint64_t pos = 0; pos < width(s); ++pos) {
      Natural a = a_at(pos);
      auto steps = entry(a, s);
      if (!steps) continue;
      std::uint64_t t = stage_of_fuel(*steps);
      auto J = dense_index(coarse_view(a, t));
      if (J) out.push_back({a, t, *J, dense_point(dm_.space, *J), *steps});
    }
    return out;
  }

  /// Accepts once some e(a) is seen in A within fuel s.
  std::optional<std::uint64_t> nonempty(std::uint64_t s) {
    for (std::uint64_t pos = 0; pos < width(s); ++pos)
      if (auto st = entry(a_at(pos), s)) return *st;
    return std::nullopt;
  }

  /// Least j whose dense point lies in every listed basic set.
  std::optional<std::uint64_t> dense_index(const std::vector<std::uint64_t>& codes) const {
    std::uint64_t hi = 1;
    for (auto c : codes) hi = std::max(hi, c + 1);
    for (std::uint64_t j = 0; j <= hi; ++j) {
      bool ok = true;
      for (auto c : codes) ok = ok && dm_.member(j, c);
      if (ok) return j;
    }
    return std::nullopt;
  }

 private:
  std::optional<std::uint64_t> entry(const Natural& a, std::uint64_t s) {
    auto& slot = cache_[a.hash()];
    for (auto& [key, val] : slot)
      if (key == a) {
        if (val.first && *val.first <= s) return val.first;
        if (!val.first && val.second >= s) return std::nullopt;
        val = {I_.entry(index(a), s), s};
        return val.first;
      }
    auto r = I_.entry(index(a), s);
    slot.push_back({a, {r, s}});
    return r;
  }

  Natural body() const {
    using namespace dsl;
    const Prelude& pre = Prelude::get();
    // allin on <a,<t,<j,i>>>: every c in W_a[t] from i upward contains x_j
    Natural allin = [&] {
      T self = fst(), in = snd();
      T a = comp(fst(), in), t = comp(fst(), snd(), in), j = comp(fst(), snd(), snd(), in),
        i = comp(snd(), snd(), snd(), in);
      T next = comp(univ(), pr(self, pr(a, pr(t, pr(j, comp(succ(), i))))));
      T ok = either(negate(clock_halted(a, i, sigma(t))), comp(univ(), pr(lit(dm_.program), pr(j, i))));
      T beyond = call(pre.leq, pr(i, pr(t, zero())));
      return quine_with(encode(if0(beyond, if0(ok, next, lit(1)), lit(0))));
    }();
    // Mu body sees <<own,<a,n>>, m>
    T X = fst(), m = snd();
    T own = comp(fst(), X), a = comp(fst(), snd(), X), n = comp(snd(), snd(), X);
    T t = comp(mu(clock_halted(lit(I_.e), fst(), sigma(snd()))), own);
    T J = comp(mu(call(allin, pr(comp(fst(), fst()), pr(comp(snd(), fst()), pr(snd(), zero()))))), pr(a, t));
    T first = both(in_coarse(a, n, m), not_before(I_.e, own, m));
    T second = both(in_at(I_.e, own, m), comp(univ(), pr(lit(dm_.program), pr(J, n))));
    return encode(mu(either(first, second)));
  }

  StagedSet I_;
  DenseMembership dm_;
  std::vector<Natural> universe_;
  Family fam_;
  std::map<std::size_t, std::vector<std::pair<Natural, std::pair<std::optional<std::uint64_t>, std::uint64_t>>>> cache_;
};

// ---------------------------------------------------------------------------
// Σ⁰₂ pair sequences

/// A region of the space: empty, a basic set, or everything.
struct Region {
  enum Kind { Empty, Basic, Whole } kind = Empty;
  std::uint64_t code = 0;

  bool contains(const Point& x) const { return kind == Whole || (kind == Basic && in_basis(x, code)); }
  std::string text() const {
    return kind == Empty ? "empty" : kind == Whole ? "all" : "B" + std::to_string(code);
  }
};

struct PairStage {
  Region U, V;
  bool upgraded = false;
};

/// Pairs (U_n,V_n) for a Markov index i: (B_n,∅) upgrades to (X,B_n) once
/// n ∈ W_i, and (X,∅) upgrades to (X,X) once i ∈ P_n ∩ Q_n. The induced
/// C_i = ⋂_n (U_n∖V_n)^c is {x_i} when i names x_i and lies in every P_n ∩ Q_n.
/// Only the first k levels of each kind are built.
class Sigma2Builder {
 public:
  Sigma2Builder(std::vector<StagedSet> P, std::vector<StagedSet> Q, Natural i, std::uint64_t k)
      : P_(std::move(P)), Q_(std::move(Q)), i_(std::move(i)), k_(k) {
    if (P_.empty() || Q_.empty()) throw std::invalid_argument("empty level list");
  }

  /// Pairs 0..2k-1 as seen with fuel s; index 2n is the even pair of n.
  std::vector<PairStage> pairs(std::uint64_t s) const {
    std::vector<PairStage> out;
    for (std::uint64_t n = 0; n < k_; ++n) {
      bool in_w = eval(i_, n, s).halted;
      out.push_back(in_w ? PairStage{{Region::Whole}, {Region::Basic, n}, true}
                         : PairStage{{Region::Basic, n}, {Region::Empty}, false});
      const StagedSet& p = P_[std::min<std::size_t>(n, P_.size() - 1)];
      const StagedSet& q = Q_[std::min<std::size_t>(n, Q_.size() - 1)];
      bool both_in = p.contains(i_, s) && q.contains(i_, s);
      out.push_back(both_in ? PairStage{{Region::Whole}, {Region::Whole}, true}
                            : PairStage{{Region::Whole}, {Region::Empty}, false});
    }
    return out;
  }

  /// x ∈ C_i as read at stage s.
  bool in_C(const Point& x, std::uint64_t s) const {
    for (const PairStage& p : pairs(s))
      if (p.U.contains(x) && !p.V.contains(x)) return false;
    return true;
  }

 private:
  std::vector<StagedSet> P_, Q_;
  Natural i_;
  std::uint64_t k_;
};

}  // namespace cwb
