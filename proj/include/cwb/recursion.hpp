#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "cwb/eval.hpp"
#include "cwb/godel.hpp"
#include "cwb/term.hpp"

namespace cwb {

/// Small combinators for writing programs in C++.
namespace dsl {
using T = Term;
inline T zero() { return T::zero(); }
inline T succ() { return T::succ(); }
inline T pred() { return T::pred(); }
inline T id() { return T::id(); }
inline T fst() { return T::fst(); }
inline T snd() { return T::snd(); }
inline T univ() { return T::univ(); }
inline T clock() { return T::clock(); }
inline T lit(Natural n) { return T::lit(std::move(n)); }
inline T mu(T t) { return T::mu(std::move(t)); }
inline T if0(T c, T a, T b) { return T::if0(std::move(c), std::move(a), std::move(b)); }
inline T pr(T a, T b) { return T::pair(std::move(a), std::move(b)); }
template <class... R>
T pr(T a, T b, T c, R... rest) {
  return T::pair(std::move(a), pr(std::move(b), std::move(c), std::move(rest)...));
}
/// comp(f, g, h) = f ∘ g ∘ h.
inline T comp(T f, T g) { return T::comp(std::move(f), std::move(g)); }
template <class... R>
T comp(T f, T g, T h, R... rest) {
  return T::comp(std::move(f), comp(std::move(g), std::move(h), std::move(rest)...));
}
/// Apply the program with index e to the value computed by arg.
inline T call(const Natural& e, T arg) { return comp(univ(), pr(lit(e), std::move(arg))); }
/// Computes the code of Lit(x) from x, mirroring the squeezed columns.
inline T lit_code(T x) {
  T up8 = comp(succ(), succ(), succ(), succ(), succ(), succ(), succ(), succ());
  T up4 = comp(succ(), succ(), succ(), succ(), fst());
  T down7 = comp(pred(), pred(), pred(), pred(), pred(), pred(), pred(), fst());
  return comp(pr(if0(down7, fst(), up4), snd()), up8, std::move(x));
}
/// 0 when both are 0 (booleans use 0 for true).
inline T both(T p, T q) { return if0(std::move(p), std::move(q), lit(1)); }
inline T either(T p, T q) { return if0(std::move(p), lit(0), std::move(q)); }
inline T negate(T p) { return if0(std::move(p), lit(1), lit(0)); }
/// 0 iff Clock(<e,<n,s>>) saw a halt.
inline T clock_halted(T e, T n, T s) {
  return if0(comp(clock(), pr(std::move(e), std::move(n), std::move(s))), lit(1), lit(0));
}
}  // namespace dsl

/// e with φ_e(n) = φ_body(<e,n>).
///
/// Builds g with φ_g(<a,n>) = φ_body(<smn(a,a),n>) where smn(a,a) is
/// assembled in-language from the raw code columns, and returns smn(g,g).
inline Natural quine_with(const Natural& body) {
  using namespace dsl;
  Natural id_code = encode(id());
  T self = pr(lit(8), fst(), lit(7), lit_code(fst()), lit(id_code));
  Natural g = encode(comp(decode(body), pr(self, snd())));
  return smn(g, g);
}

struct FixedPointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// e with φ_e = φ_{φ_f(e)}. The transformer is run once on the result;
/// exceeding `ceiling` steps aborts with a diagnostic.
inline Natural fixed_point(const Natural& f, std::uint64_t ceiling = 100000) {
  using namespace dsl;
  // <m,n> ↦ φ_{φ_f(m)}(n)
  T body = comp(univ(), pr(comp(univ(), pr(lit(f), fst())), snd()));
  Natural e = quine_with(encode(body));
  EvalResult r = eval(f, e, ceiling);
  if (!r.halted)
    throw FixedPointError("transformer did not halt on the constructed index within " + std::to_string(ceiling) +
                          " steps; it is not total");
  return e;
}

/// Parameterized fixed points: φ_{φ_g(A)}(n) = φ_body(<φ_g(A), <A, n>>).
/// Tuples of arity k are right-nested pairs <a1,<a2,...>>.
struct Family {
  Natural body;
  std::size_t arity = 1;
  Natural q;  // φ_q(<<y,A>,n>) = φ_body(<smn(y,<y,A>), <A,n>>)
  Natural g;  // total: A ↦ smn(q, <q,A>)
  /// Upper bound on the steps of φ_g on any input (g has no loops).
  std::uint64_t index_steps = 0;

  /// Meta-level evaluation of φ_g(A); equal to running g.
  Natural index(const Natural& A) const { return smn(q, pair(q, A)); }
};

inline Family family_fixed_point(const Natural& body, std::size_t arity) {
  using namespace dsl;
  Natural id_code = encode(id());
  // input <<y,A>,n>; builds smn(y,<y,A>) = <8,<y,<7,<lit(<y,A>),id>>>>
  T self = pr(lit(8), comp(fst(), fst()), lit(7), lit_code(fst()), lit(id_code));
  Family fam;
  fam.body = body;
  fam.arity = arity;
  fam.q = encode(comp(decode(body), pr(self, comp(snd(), fst()), snd())));
  T g = pr(lit(8), lit(fam.q), lit(7), lit_code(pr(lit(fam.q), id())), lit(id_code));
  fam.g = encode(g);
  fam.index_steps = g.size();
  return fam;
}

/// Tuple helpers matching the right-nested convention.
inline Natural tuple(std::initializer_list<Natural> xs) {
  if (xs.size() == 0) return 0;
  auto it = xs.end();
  Natural acc = *--it;
  while (it != xs.begin()) acc = pair(*--it, acc);
  return acc;
}

/// Arithmetic helpers written as self-referential programs.
struct Prelude {
  Natural add;    // <x,y> ↦ x+y
  Natural monus;  // <x,y> ↦ x ∸ y
  Natural eq;     // <x,y> ↦ 0 iff x = y, else 1
  Natural leq;    // <x,y> ↦ 0 iff x ≤ y, else a positive number
  Natural parity; // n ↦ n mod 2

  static const Prelude& get() {
    static const Prelude p = build();
    return p;
  }

 private:
  static Prelude build() {
    using namespace dsl;
    Prelude p;
    // bodies receive <self,<x,y>>
    T self = fst(), x = comp(fst(), snd()), y = comp(snd(), snd());
    T rec_add = comp(succ(), univ(), pr(self, pr(x, comp(pred(), y))));
    p.add = quine_with(encode(if0(y, x, rec_add)));
    T rec_monus = comp(univ(), pr(self, pr(comp(pred(), x), comp(pred(), y))));
    p.monus = quine_with(encode(if0(y, x, rec_monus)));
    p.leq = p.monus;
    T m = call(p.monus, id());
    T swapped = call(p.monus, pr(snd(), fst()));
    p.eq = encode(if0(m, if0(swapped, lit(0), lit(1)), lit(1)));
    T n = snd();
    T rec_par = comp(univ(), pr(self, comp(pred(), pred(), n)));
    p.parity = quine_with(encode(if0(n, lit(0), if0(comp(pred(), n), lit(1), rec_par))));
    return p;
  }
};

}  // namespace cwb
