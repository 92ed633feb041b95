#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cwb/cantor.hpp"

namespace cwb {

// ---------------------------------------------------------------------------
// Halting queries

/// φ_q(q)↓ iff φ_b(n)↓.
inline Natural halt_query(const Natural& b, std::uint64_t n) {
  static const Natural run_pair = encode(dsl::comp(dsl::univ(), dsl::fst()));
  return smn(run_pair, pair(b, Natural(n)));
}

/// φ_z(z)↓ iff φ_c(n)↓ ≠ 0 for some n.
inline Natural nonzero_query(const Natural& c) {
  using namespace dsl;
  // Mu body on <<c,_>,<n,s>>: clock value v+1 >= 2 means φ_c(n) = v > 0 within s
  static const Natural search = [] {
    T c = comp(fst(), fst()), n = comp(fst(), snd()), s = comp(snd(), snd());
    T v = comp(clock(), pr(c, pr(n, s)));
    return encode(mu(if0(v, lit(1), if0(comp(pred(), v), lit(1), lit(0)))));
  }();
  return smn(search, c);
}

/// Answers "does φ_q(q) halt?". Exact mode knows a curated table of facts
/// and nothing else; bounded mode runs q on itself for s steps and may say
/// no to a halting q. A surrogate mode answers from an arbitrary function.
class HaltingOracle {
 public:
  using Lookup = std::function<std::optional<bool>(const Natural&)>;

  static HaltingOracle exact(std::vector<std::pair<Natural, bool>> facts) {
    auto table = std::make_shared<std::vector<std::pair<Natural, bool>>>(std::move(facts));
    return HaltingOracle("exact", false, [table](const Natural& q) -> std::optional<bool> {
      for (const auto& [k, v] : *table)
        if (k == q) return v;
      return std::nullopt;
    });
  }
  static HaltingOracle bounded(std::uint64_t s) {
    return HaltingOracle("bounded:" + std::to_string(s), true,
                         [s](const Natural& q) -> std::optional<bool> { return eval(q, q, s).halted; });
  }
  static HaltingOracle surrogate(std::string tag, Lookup f) { return HaltingOracle(std::move(tag), false, std::move(f)); }

  /// Nothing when the query lies outside what the oracle knows.
  std::optional<bool> query(const Natural& q) const {
    ++*count_;
    return f_(q);
  }
  const std::string& tag() const { return tag_; }
  bool approximate() const { return approximate_; }
  std::uint64_t queries() const { return *count_; }

 private:
  HaltingOracle(std::string tag, bool approx, Lookup f)
      : tag_(std::move(tag)), approximate_(approx), f_(std::move(f)), count_(std::make_shared<std::uint64_t>(0)) {}

  std::string tag_;
  bool approximate_;
  Lookup f_;
  std::shared_ptr<std::uint64_t> count_;
};

// ---------------------------------------------------------------------------
// K-semidecidability from Markov semidecidability relative to the halting set

/// A Markov semidecider relative to H: whether index c is accepted at stage s.
using RelativeMarkov = std::function<bool(const Natural& c, const HaltingOracle& H, std::uint64_t s)>;

/// Accepts c iff H says x_c never outputs a nonzero bit: {0^ω} among total points.
inline RelativeMarkov zero_sequence_decider() {
  return [](const Natural& c, const HaltingOracle& H, std::uint64_t) {
    auto a = H.query(nonzero_query(c));
    return a.has_value() && !*a;
  };
}

/// Three curated programs: total 0^ω, nowhere defined, total 1^ω.
struct RelativeUniverse {
  std::vector<Natural> programs;
  std::vector<std::string> labels;
  std::uint64_t partial_probe = 0;  // partiality is tested on n <= this
  std::vector<std::pair<Natural, bool>> facts;

  HaltingOracle exact_oracle() const { return HaltingOracle::exact(facts); }
};

inline RelativeUniverse zero_partial_one_universe(std::uint64_t partial_probe = 2) {
  RelativeUniverse u;
  Natural zeros = encode(dsl::zero()), partial = encode(dsl::mu(dsl::succ())), ones = encode(dsl::lit(1));
  u.programs = {zeros, partial, ones};
  u.labels = {"zeros", "partial", "ones"};
  u.partial_probe = partial_probe;
  // known by construction
  for (std::uint64_t n = 0; n <= partial_probe; ++n) {
    u.facts.push_back({halt_query(zeros, n), true});
    u.facts.push_back({halt_query(partial, n), false});
    u.facts.push_back({halt_query(ones, n), true});
  }
  u.facts.push_back({nonzero_query(zeros), false});
  u.facts.push_back({nonzero_query(partial), false});
  u.facts.push_back({nonzero_query(ones), true});
  return u;
}

enum class Role { Incompatible = 0, Partial = 1, Candidate = 2 };

inline const char* role_name(Role r) {
  switch (r) {
    case Role::Incompatible: return "A";
    case Role::Partial: return "B";
    case Role::Candidate: return "C";
  }
  return "?";
}

struct RelativeVerdict {
  bool accepted = false;
  std::uint64_t stage = 0;
  std::vector<Role> partition;
  std::uint64_t bit_queries = 0;
  std::uint64_t oracle_queries = 0;
  std::string oracle;
  bool approximate = false;  // partiality answers came from a bounded oracle
};

/// Looks for a partition of the universe into A (some x_a(n)↓ ≠ x(n)),
/// B (some x_b(n)↑, asked of H) and a nonempty C accepted by M. Stages
/// double from 1 to `budget`; at stage s outputs are run for s steps on
/// n < min(s, 64) and partiality is asked for n <= min(s, partial_probe).
inline RelativeVerdict relative_k(const RelativeMarkov& M, const HaltingOracle& H, const Type2Name& x_name,
                                  const std::vector<Natural>& universe, std::uint64_t partial_probe,
                                  std::uint64_t budget) {
  BitReader x(x_name);
  RelativeVerdict out;
  out.oracle = H.tag();
  out.approximate = H.approximate();
  const std::size_t N = universe.size();
  std::vector<bool> inc(N, false), par(N, false);
  std::uint64_t q0 = H.queries();
  for (std::uint64_t s = 1;; s = std::min(budget, 2 * s)) {
    for (std::size_t i = 0; i < N; ++i) {
      for (std::uint64_t n = 0; !inc[i] && n < std::min<std::uint64_t>(s, 64); ++n) {
        EvalResult r = eval(universe[i], n, s);
        if (!r.halted) continue;
        auto b = x.bit(n);
        if (b && r.value != Natural(*b)) inc[i] = true;
      }
      for (std::uint64_t n = 0; !inc[i] && !par[i] && n <= std::min(s, partial_probe); ++n) {
        auto h = H.query(halt_query(universe[i], n));
        if (h && !*h) par[i] = true;
      }
    }
    std::vector<Role> p(N);
    bool ok = true, any_c = false;
    for (std::size_t i = 0; ok && i < N; ++i) {
      if (inc[i]) p[i] = Role::Incompatible;
      else if (par[i]) p[i] = Role::Partial;
      else if (M(universe[i], H, s)) p[i] = Role::Candidate, any_c = true;
      else ok = false;
    }
    if (ok && any_c) {
      out.accepted = true;
      out.stage = s;
      out.partition = p;
      break;
    }
    if (s >= budget) {
      out.stage = budget;
      break;
    }
  }
  out.bit_queries = x.bit_queries();
  out.oracle_queries = H.queries() - q0;
  return out;
}

// ---------------------------------------------------------------------------
// The function T and open subsets of Baire space

/// Coordinates of T: a fixed list of indices with exactly known self-halting
/// times (0 for divergence), continued by index n − |list| at coordinate n.
class TCoordinates {
 public:
  struct Entry {
    Natural index;
    bool diverges;  // by construction
    std::string label;
  };

  explicit TCoordinates(std::vector<Entry> list) : list_(std::move(list)) {
    for (const Entry& e : list_) {
      EvalResult r = eval(e.index, e.index, kExactFuel);
      if (e.diverges) {
        if (r.halted) throw std::logic_error("declared divergent index halts: " + e.label);
        T_.push_back(0);
      } else {
        if (!r.halted) throw std::logic_error("declared halting index did not halt: " + e.label);
        T_.push_back(r.steps);
      }
    }
  }

  /// [loop, 0, counting program]: the coordinates of sierp_to_OB.
  static TCoordinates sierp() {
    Natural loop = encode(dsl::mu(dsl::succ()));
    Natural counting = encode(Term::comp(Term::clock(), Term::lit(pair(loop, pair(Natural(0), Natural(3))))));
    return TCoordinates({{loop, true, "loop"}, {Natural(0), false, "zero"}, {counting, false, "clocked loop"}});
  }

  /// The queries the partition algorithm asks on the curated universe come
  /// first, so a short prefix of T answers them.
  static TCoordinates for_relative(const RelativeUniverse& U) {
    std::vector<Entry> list;
    list.push_back({halt_query(U.programs[1], 0), true, "halt(partial,0)"});
    list.push_back({nonzero_query(U.programs[0]), true, "nonzero(zeros)"});
    list.push_back({nonzero_query(U.programs[2]), false, "nonzero(ones)"});
    list.push_back({halt_query(U.programs[0], 0), false, "halt(zeros,0)"});
    list.push_back({halt_query(U.programs[2], 0), false, "halt(ones,0)"});
    list.push_back({nonzero_query(U.programs[1]), true, "nonzero(partial)"});
    return TCoordinates(std::move(list));
  }

  std::size_t size() const { return list_.size(); }
  const Entry& entry(std::size_t n) const { return list_[n]; }
  std::uint64_t T(std::size_t n) const { return T_.at(n); }

  Natural index_at(std::uint64_t n) const { return n < list_.size() ? list_[n].index : Natural(n - list_.size()); }

  std::optional<std::uint64_t> coordinate_of(const Natural& e) const {
    for (std::size_t n = 0; n < list_.size(); ++n)
      if (list_[n].index == e) return n;
    if (e.is_small()) return list_.size() + e.u64();
    return std::nullopt;
  }

  /// u agrees with T; only meaningful within the curated coordinates.
  bool compatible(const std::vector<std::uint64_t>& u) const {
    if (u.size() > list_.size()) throw std::invalid_argument("T is known exactly only on the curated coordinates");
    for (std::size_t n = 0; n < u.size(); ++n)
      if (u[n] != T_[n]) return false;
    return true;
  }

  static constexpr std::uint64_t kExactFuel = 1000000;

 private:
  std::vector<Entry> list_;
  std::vector<std::uint64_t> T_;
};

namespace detail {

// φ_q(q) halts in exactly m steps
inline bool halts_exactly(const Natural& q, std::uint64_t m) {
  EvalResult r = eval(q, q, m);
  return r.halted && r.steps == m;
}

// all sequences of length 1..depth over 0..vmax, shortlex
inline std::vector<std::vector<std::uint64_t>> cylinders(std::uint64_t depth, std::uint64_t vmax) {
  std::vector<std::vector<std::uint64_t>> out, layer = {{}};
  for (std::uint64_t d = 1; d <= depth; ++d) {
    std::vector<std::vector<std::uint64_t>> next;
    for (const auto& u : layer)
      for (std::uint64_t m = 0; m <= vmax; ++m) {
        auto v = u;
        v.push_back(m);
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace detail

/// An emitted cylinder [u] with the branch that certified it.
struct BaireEmission {
  std::vector<std::uint64_t> u;
  Natural code;
  std::string branch;
};

/// Certificates that [u] misses T, read at stage s: some coordinate with
/// u(n) = m > 0 where φ(n) does not halt in exactly m steps (decidable), or
/// u(n) = 0 where φ(n) halts within s (semidecidable).
class TIncompatibility {
 public:
  explicit TIncompatibility(TCoordinates coords) : T_(std::move(coords)) {}

  bool certified(const std::vector<std::uint64_t>& u, std::uint64_t s) {
    for (std::size_t n = 0; n < u.size(); ++n)
      if (u[n] > 0 ? !exactly(n, u[n]) : halts_by(n, s)) return true;
    return false;
  }
  const TCoordinates& coords() const { return T_; }

 private:
  bool exactly(std::size_t n, std::uint64_t m) {
    auto key = std::make_pair(n, m);
    auto it = exact_.find(key);
    if (it == exact_.end()) it = exact_.emplace(key, detail::halts_exactly(T_.index_at(n), m)).first;
    return it->second;
  }
  bool halts_by(std::size_t n, std::uint64_t s) {
    auto& [steps, tried] = halt_[n];
    if (steps) return *steps <= s;
    if (tried >= s) return false;
    Natural q = T_.index_at(n);
    EvalResult r = eval(q, q, s);
    tried = s;
    if (r.halted) steps = r.steps;
    return r.halted;
  }

  TCoordinates T_;
  std::map<std::pair<std::size_t, std::uint64_t>, bool> exact_;
  std::map<std::size_t, std::pair<std::optional<std::uint64_t>, std::uint64_t>> halt_;
};

/// Values up to bitlen(s), capped, are considered at stage s.
inline std::uint64_t baire_value_bound(std::uint64_t s) { return std::min<std::uint64_t>(bitlen(s), 32); }

/// F(s) for s ∈ 𝕊 named by e (⊤ iff φ_e(e)↓): the open set 𝔹∖{T}, plus
/// every f with f(c_e) ≠ T(c_e) where c_e is e's coordinate. So F(⊥) = 𝔹 and
/// F(⊤) = 𝔹∖{T}.
class SierpToOB {
 public:
  explicit SierpToOB(Natural e, TCoordinates coords = TCoordinates::sierp(), std::uint64_t depth = 3)
      : e_(std::move(e)), inc_(std::move(coords)), depth_(depth) {
    if (depth_ > inc_.coords().size()) throw std::invalid_argument("depth beyond the curated coordinates");
    auto c = inc_.coords().coordinate_of(e_);
    if (!c) throw std::invalid_argument("index has no coordinate");
    ce_ = *c;
  }

  std::uint64_t coordinate() const { return ce_; }
  const TCoordinates& coords() const { return inc_.coords(); }

  std::vector<BaireEmission> emit(std::uint64_t s) {
    std::vector<BaireEmission> out;
    for (const auto& u : detail::cylinders(depth_, baire_value_bound(s))) {
      if (inc_.certified(u, s)) out.push_back({u, baire_code(u), "T-incompatible"});
      else if (ce_ < u.size() && !fixes(u[ce_])) out.push_back({u, baire_code(u), "coordinate-e"});
    }
    return out;
  }

 private:
  bool fixes(std::uint64_t m) {
    auto it = fix_.find(m);
    if (it == fix_.end()) it = fix_.emplace(m, detail::halts_exactly(e_, m)).first;
    return it->second;
  }

  Natural e_;
  TIncompatibility inc_;
  std::uint64_t depth_;
  std::uint64_t ce_ = 0;
  std::map<std::uint64_t, bool> fix_;
};

/// G(x) = 𝔹 for x = 0^ω and 𝔹∖{T} otherwise: [u] is emitted when it misses
/// T by certificate, or when the partition algorithm accepts x with H read
/// off u (H(q) = u(coordinate of q) > 0), asking nothing beyond |u|.
class CantorToOBG {
 public:
  CantorToOBG(Type2Name x, RelativeUniverse U, std::uint64_t depth = 3)
      : x_(std::move(x)), U_(std::move(U)), inc_(TCoordinates::for_relative(U_)), depth_(depth) {
    if (depth_ > inc_.coords().size()) throw std::invalid_argument("depth beyond the curated coordinates");
  }

  const TCoordinates& coords() const { return inc_.coords(); }

  std::vector<BaireEmission> emit(std::uint64_t s) {
    std::vector<BaireEmission> out;
    for (const auto& u : detail::cylinders(depth_, baire_value_bound(s))) {
      if (inc_.certified(u, s)) out.push_back({u, baire_code(u), "T-incompatible"});
      else if (accepts_with(u, s)) out.push_back({u, baire_code(u), "relative-accept"});
    }
    return out;
  }

 private:
  // the run only sees which of u's coordinates are positive, and |u|
  bool accepts_with(const std::vector<std::uint64_t>& u, std::uint64_t s) {
    std::vector<bool> key;
    for (auto m : u) key.push_back(m > 0);
    auto& slot = runs_[key];
    if (slot.second >= s) return slot.first;
    const TCoordinates& T = inc_.coords();
    HaltingOracle H = HaltingOracle::surrogate("prefix-of-T", [key, &T](const Natural& q) -> std::optional<bool> {
      auto c = T.coordinate_of(q);
      if (!c || *c >= key.size()) return std::nullopt;
      return key[*c];
    });
    auto v = relative_k(zero_sequence_decider(), H, x_, U_.programs, U_.partial_probe, std::min<std::uint64_t>(s, 4096));
    slot = {v.accepted, s};
    return v.accepted;
  }

  Type2Name x_;
  RelativeUniverse U_;
  TIncompatibility inc_;
  std::uint64_t depth_;
  std::map<std::vector<bool>, std::pair<bool, std::uint64_t>> runs_;
};

/// Every depth-`depth` cylinder over values <= vmax has an emitted prefix.
inline bool covers(const std::vector<BaireEmission>& em, std::uint64_t depth, std::uint64_t vmax) {
  std::set<std::vector<std::uint64_t>> have;
  for (const auto& e : em) have.insert(e.u);
  for (const auto& u : detail::cylinders(depth, vmax)) {
    if (u.size() != depth) continue;
    bool hit = false;
    for (std::size_t l = 1; !hit && l <= u.size(); ++l) hit = have.count({u.begin(), u.begin() + l}) > 0;
    if (!hit) return false;
  }
  return true;
}

}  // namespace cwb
