#pragma once

#include "cwb/eval.hpp"
#include "cwb/natural.hpp"
#include "cwb/term.hpp"

namespace cwb {

/// Index of Comp(decode(e), Pair(Lit(x), Id)): φ_smn(e,x)(y) = φ_e(<x,y>).
inline Natural smn(const Natural& e, const Natural& x) {
  return encode(Term::comp(decode(e), Term::pair(Term::lit(x), Term::id())));
}

/// Code of the universal program Univ: φ_u(<e,n>) = φ_e(n).
inline Natural universal_index() { return encode(Term::univ()); }

/// A strictly larger index of the same function.
inline Natural pad(const Natural& e) { return encode(Term::comp(Term::id(), decode(e))); }

/// Fixed cost added by smn: the Comp, Pair, Lit and Id visits.
inline constexpr std::uint64_t kSmnOverhead = 4;
/// Fixed cost added by universal application: the Univ visit.
inline constexpr std::uint64_t kUnivOverhead = 1;
/// Fixed cost added by pad: the Comp and Id visits.
inline constexpr std::uint64_t kPadOverhead = 2;

}  // namespace cwb
