#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "cwb/recursion.hpp"

namespace cwb {

/// In-language building blocks shared by the spaces and constructions.
///
/// Everything here is an index of the toy language; booleans are 0 = true.
struct Programs {
  Natural loop;         // diverges everywhere
  Natural half;         // n ↦ ⌊n/2⌋
  Natural cantor_len;   // c ↦ |u_c| for the length-lex string numbering
  Natural cantor_check; // <P,c> ↦ halts iff u_c is a prefix of the bits φ_P(0),φ_P(1),...
  Natural baire_len;    // c ↦ length of the finite sequence coded by c
  Natural baire_check;  // <P,c> ↦ halts iff sequence c is a prefix of φ_P
  Natural pown_check;   // <E,c> ↦ halts iff F_c ⊆ W_E
  Natural odd;          // halts exactly on odd numbers: the canonical name of ∞ in ℕ̄
  Natural odd_fast;     // same domain, unrolled; cheaper to run but a far larger code
  Natural sierp_top;    // halts exactly on {0,1}
  Natural sierp_bot;    // halts exactly on {0}

  static const Programs& get() {
    static const Programs p = build();
    return p;
  }

  /// Halts on i iff halts[i] for i < |halts|, and iff `beyond` afterwards.
  /// An unrolled chain of predecessor tests, so input i costs O(min(i,|halts|)).
  static Natural table(const std::vector<bool>& halts, bool beyond) {
    using namespace dsl;
    T loop_t = mu(succ());
    T f = beyond ? lit(0) : loop_t;
    for (auto it = halts.rbegin(); it != halts.rend(); ++it) f = if0(id(), *it ? lit(0) : loop_t, comp(f, pred()));
    return encode(f);
  }

  /// Halts exactly on the listed values.
  static Natural finite_set(const std::vector<Natural>& values) {
    using namespace dsl;
    std::uint64_t top = 0;
    bool small = true;
    for (const Natural& v : values) {
      if (!v.is_small() || v.u64() > 4096) small = false;
      else top = std::max(top, v.u64());
    }
    if (small) {
      std::vector<bool> h(values.empty() ? 0 : top + 1, false);
      for (const Natural& v : values) h[v.u64()] = true;
      return table(h, false);
    }
    const Prelude& pre = Prelude::get();
    T out = mu(succ());
    for (auto it = values.rbegin(); it != values.rend(); ++it) out = if0(call(pre.eq, pr(id(), lit(*it))), lit(0), out);
    return encode(out);
  }

  /// i ↦ prefix[i] for i < |prefix|, tail afterwards.
  static Natural eventually_constant(const std::vector<std::uint64_t>& prefix, std::uint64_t tail) {
    using namespace dsl;
    T f = lit(tail);
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) f = if0(id(), lit(*it), comp(f, pred()));
    return encode(f);
  }

  /// Name of n ∈ ℕ̄: halts on 2n and on the tail codes 2m+1 with m <= n.
  static Natural nbar_name(std::uint64_t n) {
    std::vector<bool> h(2 * n + 2, false);
    for (std::uint64_t i = 1; i <= 2 * n + 1; i += 2) h[i] = true;
    h[2 * n] = true;
    return table(h, false);
  }

  static Natural cantor_name(const Natural& bits) { return smn(get().cantor_check, bits); }
  static Natural baire_name(const Natural& values) { return smn(get().baire_check, values); }
  static Natural pown_name(const Natural& set) { return smn(get().pown_check, set); }

 private:
  static Programs build() {
    using namespace dsl;
    const Prelude& pre = Prelude::get();
    Programs p;
    T loop_t = mu(succ());
    p.loop = encode(loop_t);
    // bodies receive <self, input>
    T self = fst(), n = snd();
    auto rec = [&](T arg) { return comp(univ(), pr(self, std::move(arg))); };

    p.half = quine_with(encode(if0(n, lit(0), if0(comp(pred(), n), lit(0), comp(succ(), rec(comp(pred(), pred(), n)))))));
    p.cantor_len = quine_with(encode(if0(n, lit(0), comp(succ(), rec(call(p.half, comp(pred(), n)))))));
    p.baire_len = quine_with(encode(if0(n, lit(0), comp(succ(), rec(comp(fst(), pred(), n))))));

    {
      // input <P,c>; u_c = u_parent·b with parent = ⌊(c-1)/2⌋, b = (c-1) mod 2
      T P = comp(fst(), snd()), c = comp(snd(), snd());
      T parent = call(p.half, comp(pred(), c));
      T b = call(pre.parity, comp(pred(), c));
      T bit = comp(univ(), pr(P, call(p.cantor_len, parent)));
      T test = call(pre.eq, pr(bit, b));
      p.cantor_check = quine_with(encode(if0(c, lit(0), if0(test, rec(pr(P, parent)), loop_t))));
    }
    {
      // sequence codes: 0 = empty, 1 + <σ,m> = σ followed by m
      T P = comp(fst(), snd()), c = comp(snd(), snd());
      T sigma = comp(fst(), pred(), c), m = comp(snd(), pred(), c);
      T val = comp(univ(), pr(P, call(p.baire_len, sigma)));
      T test = call(pre.eq, pr(val, m));
      p.baire_check = quine_with(encode(if0(c, lit(0), if0(test, rec(pr(P, sigma)), loop_t))));
    }
    {
      // input <E,<c,k>>: bit k of the original code is the low bit of c
      T E = comp(fst(), snd()), c = comp(fst(), snd(), snd()), k = comp(snd(), snd(), snd());
      T rest = rec(pr(E, pr(call(p.half, c), comp(succ(), k))));
      T run_k = comp(univ(), pr(E, k));
      Natural walk = quine_with(encode(if0(c, lit(0), if0(call(pre.parity, c), rest, comp(snd(), pr(run_k, rest))))));
      p.pown_check = encode(comp(univ(), pr(lit(walk), pr(fst(), pr(snd(), zero())))));
    }
    {
      // sixteen residues per round on <self,x>, then φ_self(x-16)
      T step = pr(fst(), comp(pred(), snd()));
      T g = univ();
      for (int r = 15; r >= 0; --r) g = if0(snd(), r % 2 ? lit(0) : loop_t, comp(g, step));
      p.odd_fast = quine_with(encode(g));
    }
    p.odd = encode(if0(call(pre.parity, id()), loop_t, lit(0)));
    p.sierp_top = encode(if0(pred(), lit(0), loop_t));
    p.sierp_bot = encode(if0(id(), lit(0), loop_t));
    return p;
  }
};

}  // namespace cwb
