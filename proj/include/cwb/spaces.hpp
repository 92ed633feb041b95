#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cwb/complexity.hpp"
#include "cwb/programs.hpp"
#include "cwb/staged.hpp"

namespace cwb {

/// The five curated effective spaces.
enum class SpaceId { Sierp, NBar, Cantor, Baire, PowerN };

inline const char* space_name(SpaceId s) {
  switch (s) {
    case SpaceId::Sierp: return "sierp";
    case SpaceId::NBar: return "nbar";
    case SpaceId::Cantor: return "cantor";
    case SpaceId::Baire: return "baire";
    case SpaceId::PowerN: return "pown";
  }
  return "?";
}

/// Fuel allowed for a single value of a program-backed point.
inline constexpr std::uint64_t kPointFuel = 1000000;

struct PointError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A curated point.
///
/// Sierp uses `top`; NBar uses `n` (empty = ∞); Cantor and Baire are either
/// `prefix` followed by the constant `tail`, or program-backed; PowerN is
/// the finite set `finite` or the c.e. set W_program.
struct Point {
  SpaceId space = SpaceId::NBar;
  bool top = false;
  std::optional<std::uint64_t> n;
  std::vector<std::uint64_t> prefix;
  std::uint64_t tail = 0;
  std::optional<Natural> program;
  std::vector<std::uint64_t> finite;

  bool operator==(const Point& o) const {
    return space == o.space && top == o.top && n == o.n && prefix == o.prefix && tail == o.tail &&
           program == o.program && finite == o.finite;
  }

  static Point sierp(bool top) {
    Point p;
    p.space = SpaceId::Sierp;
    p.top = top;
    return p;
  }
  static Point nbar(std::optional<std::uint64_t> n) {
    Point p;
    p.space = SpaceId::NBar;
    p.n = n;
    return p;
  }
  static Point sequence(SpaceId s, std::vector<std::uint64_t> prefix, std::uint64_t tail) {
    Point p;
    p.space = s;
    while (!prefix.empty() && prefix.back() == tail) prefix.pop_back();
    p.prefix = std::move(prefix);
    p.tail = tail;
    return p;
  }
  static Point backed(SpaceId s, Natural program) {
    Point p;
    p.space = s;
    p.program = std::move(program);
    return p;
  }
  static Point finite_set(std::vector<std::uint64_t> xs) {
    Point p;
    p.space = SpaceId::PowerN;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    p.finite = std::move(xs);
    return p;
  }
};

// ---------------------------------------------------------------------------
// Basis codings

/// Code of the cylinder [u] in length-lex order: 2^|u| - 1 + value(u).
inline Natural cantor_code(const std::vector<std::uint64_t>& bits) {
  mpz_class v = 1;
  for (std::uint64_t b : bits) v = 2 * v + (b ? 1 : 0);
  return Natural(mpz_class(v - 1));
}

inline std::vector<std::uint64_t> cantor_string(const Natural& code) {
  mpz_class v = code.to_mpz() + 1;
  std::size_t m = mpz_sizeinbase(v.get_mpz_t(), 2) - 1;
  std::vector<std::uint64_t> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = mpz_tstbit(v.get_mpz_t(), m - 1 - i);
  return out;
}

/// Finite sequences: 0 is empty, 1 + <code(σ), m> is σ followed by m.
inline Natural baire_code(const std::vector<std::uint64_t>& seq) {
  Natural c = 0;
  for (std::uint64_t m : seq) c = pair(c, m).succ();
  return c;
}

inline std::vector<std::uint64_t> baire_sequence(const Natural& code) {
  std::vector<std::uint64_t> out;
  Natural c = code;
  while (!c.is_zero()) {
    auto [s, m] = unpair(c.pred());
    out.push_back(m.saturate());
    c = s;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

/// ↑F_i with F_i = {k : bit k of i}.
inline Natural pown_code(const std::vector<std::uint64_t>& set) {
  mpz_class v = 0;
  for (std::uint64_t k : set) mpz_setbit(v.get_mpz_t(), k);
  return Natural(v);
}

inline std::vector<std::uint64_t> pown_set(const Natural& code) {
  mpz_class v = code.to_mpz();
  std::vector<std::uint64_t> out;
  std::size_t len = mpz_sizeinbase(v.get_mpz_t(), 2);
  for (std::size_t k = 0; k < len; ++k)
    if (mpz_tstbit(v.get_mpz_t(), k)) out.push_back(k);
  return out;
}

// ---------------------------------------------------------------------------
// Point values

/// Program computing i ↦ x(i) for a Cantor or Baire point.
inline Natural value_program(const Point& p) {
  if (p.program) return *p.program;
  return Programs::eventually_constant(p.prefix, p.tail);
}

inline std::uint64_t value_at(const Point& p, std::uint64_t i) {
  if (!p.program) return i < p.prefix.size() ? p.prefix[i] : p.tail;
  EvalResult r = eval(*p.program, i, kPointFuel);
  if (!r.halted) throw PointError("program-backed point did not produce value " + std::to_string(i));
  return r.value.saturate();
}

inline std::vector<std::uint64_t> prefix_of(const Point& p, std::uint64_t len) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < len; ++i) out.push_back(value_at(p, i));
  return out;
}

/// Program whose domain is the PowerN point.
inline Natural set_program(const Point& p) {
  if (p.program) return *p.program;
  std::vector<Natural> xs(p.finite.begin(), p.finite.end());
  return Programs::finite_set(xs);
}

/// p ∈ B_code. For c.e. sets of naturals membership is only semidecidable;
/// `fuel` bounds each element check.
inline bool in_basis(const Point& p, const Natural& code, std::uint64_t fuel = kPointFuel) {
  switch (p.space) {
    case SpaceId::Sierp:
      if (code.is_zero()) return true;
      return code == Natural(1) && p.top;
    case SpaceId::NBar: {
      if (!code.is_small()) return false;
      std::uint64_t c = code.u64(), m = c / 2;
      if (c % 2 == 0) return p.n && *p.n == m;
      return !p.n || *p.n >= m;
    }
    case SpaceId::Cantor: {
      auto u = cantor_string(code);
      for (std::size_t i = 0; i < u.size(); ++i)
        if (value_at(p, i) != u[i]) return false;
      return true;
    }
    case SpaceId::Baire: {
      auto s = baire_sequence(code);
      for (std::size_t i = 0; i < s.size(); ++i)
        if (value_at(p, i) != s[i]) return false;
      return true;
    }
    case SpaceId::PowerN: {
      for (std::uint64_t k : pown_set(code)) {
        if (p.program) {
          if (!eval(*p.program, k, fuel).halted) return false;
        } else if (!std::binary_search(p.finite.begin(), p.finite.end(), k)) {
          return false;
        }
      }
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Presentations

/// A Type-2 name: a total enumeration of basis codes.
struct Type2Name {
  std::function<Natural(std::uint64_t)> nth;
  std::string origin;
};

/// Markov name: W_e is the filter of the point.
struct MarkovName {
  Natural e;
};

struct KName {
  ComplexityBound bound;
  Type2Name name;
};

namespace detail {

// Filter of a c.e. subset of ℕ: at stage s, list the subsets of the
// elements below bitlen(s) seen within s steps; 0 pads stages with nothing new.
class PownEnumerator {
 public:
  explicit PownEnumerator(Natural e) : e_(std::move(e)) {}

  Natural nth(std::uint64_t j) {
    std::lock_guard<std::mutex> lock(m_);
    while (list_.size() <= j) advance();
    return list_[j];
  }

 private:
  void advance() {
    std::uint64_t limit = bitlen(stage_);
    std::vector<std::uint64_t> in;
    for (std::uint64_t k = 0; k < limit; ++k)
      if (eval(e_, k, stage_).halted) in.push_back(k);
    std::size_t before = list_.size();
    for (std::uint64_t mask = 0; mask < (1ULL << in.size()); ++mask) {
      std::vector<std::uint64_t> f;
      for (std::size_t b = 0; b < in.size(); ++b)
        if (mask >> b & 1) f.push_back(in[b]);
      Natural c = pown_code(f);
      if (seen_.insert(c.str()).second) list_.push_back(c);
    }
    if (list_.size() == before) list_.push_back(0);
    ++stage_;
  }

  Natural e_;
  std::mutex m_;
  std::uint64_t stage_ = 0;
  std::vector<Natural> list_;
  std::set<std::string> seen_;
};

}  // namespace detail

/// Enumerates exactly {i : p ∈ B_i}.
inline Type2Name point_filter(const Point& p) {
  switch (p.space) {
    case SpaceId::Sierp: {
      bool top = p.top;
      return {[top](std::uint64_t j) { return Natural(top ? j % 2 : 0); }, "curated-point"};
    }
    case SpaceId::NBar: {
      if (!p.n) return {[](std::uint64_t j) { return Natural(mpz_class(2) * j + 1); }, "curated-point"};
      std::uint64_t n = *p.n;
      // {2n} then the tails 2m+1, m <= n, cyclically
      return {[n](std::uint64_t j) {
                std::uint64_t r = j % (n + 2);
                return r == 0 ? Natural(mpz_class(2) * n) : Natural(mpz_class(2) * (r - 1) + 1);
              },
              "curated-point"};
    }
    case SpaceId::Cantor:
      return {[p](std::uint64_t j) { return cantor_code(prefix_of(p, j)); },
              p.program ? "program-backed" : "curated-point"};
    case SpaceId::Baire:
      return {[p](std::uint64_t j) { return baire_code(prefix_of(p, j)); },
              p.program ? "program-backed" : "curated-point"};
    case SpaceId::PowerN: {
      if (p.program) {
        auto en = std::make_shared<detail::PownEnumerator>(*p.program);
        return {[en](std::uint64_t j) { return en->nth(j); }, "program-backed"};
      }
      std::vector<Natural> codes;
      for (std::uint64_t mask = 0; mask < (1ULL << p.finite.size()); ++mask) {
        std::vector<std::uint64_t> f;
        for (std::size_t b = 0; b < p.finite.size(); ++b)
          if (mask >> b & 1) f.push_back(p.finite[b]);
        codes.push_back(pown_code(f));
      }
      return {[codes](std::uint64_t j) { return codes[j % codes.size()]; }, "curated-point"};
    }
  }
  throw PointError("unknown space");
}

/// Index whose domain is the filter of p.
inline MarkovName markov_name_of(const Point& p) {
  const Programs& lib = Programs::get();
  switch (p.space) {
    case SpaceId::Sierp: return {p.top ? lib.sierp_top : lib.sierp_bot};
    case SpaceId::NBar: return {p.n ? Programs::nbar_name(*p.n) : lib.odd};
    case SpaceId::Cantor: return {Programs::cantor_name(value_program(p))};
    case SpaceId::Baire: return {Programs::baire_name(value_program(p))};
    case SpaceId::PowerN: return {Programs::pown_name(set_program(p))};
  }
  throw PointError("unknown space");
}

/// b_k: every object of complexity <= k has an index <= b_k.
inline Natural index_bound_from_k(ComplexityKind kind, std::uint64_t k) {
  if (kind == ComplexityKind::MinIndex) return k;
  if (k == 0) return 0;
  mpz_class v = 1;
  v <<= k;
  return Natural(mpz_class(v - 1));
}

/// Basis codes whose union is B_i ∩ B_j (at most one code in every space).
inline std::vector<Natural> intersection_codes(SpaceId s, const Natural& i, const Natural& j) {
  auto is_prefix = [](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
  };
  switch (s) {
    case SpaceId::Sierp:
      if (i > Natural(1) || j > Natural(1)) return {};
      return {i < j ? j : i};
    case SpaceId::NBar: {
      if (!i.is_small() || !j.is_small()) return {};
      std::uint64_t a = i.u64(), b = j.u64();
      bool ta = a % 2, tb = b % 2;
      std::uint64_t ma = a / 2, mb = b / 2;
      if (!ta && !tb) return ma == mb ? std::vector<Natural>{i} : std::vector<Natural>{};
      if (ta && tb) return {ma > mb ? i : j};
      std::uint64_t single = ta ? mb : ma, from = ta ? ma : mb;
      if (single >= from) return {Natural(2 * single)};
      return {};
    }
    case SpaceId::Cantor: {
      auto u = cantor_string(i), v = cantor_string(j);
      if (is_prefix(u, v)) return {j};
      if (is_prefix(v, u)) return {i};
      return {};
    }
    case SpaceId::Baire: {
      auto u = baire_sequence(i), v = baire_sequence(j);
      if (is_prefix(u, v)) return {j};
      if (is_prefix(v, u)) return {i};
      return {};
    }
    case SpaceId::PowerN: return {Natural(mpz_class(i.to_mpz() | j.to_mpz()))};
  }
  return {};
}

/// Index f(i,j) with B_i ∩ B_j = ⋃_{k ∈ W_f(i,j)} B_k.
inline Natural basis_intersect(SpaceId s, const Natural& i, const Natural& j) {
  return Programs::finite_set(intersection_codes(s, i, j));
}

/// A computable dense sequence: every nonempty basic set contains some x_i.
inline Point dense_point(SpaceId s, std::uint64_t i) {
  switch (s) {
    case SpaceId::Sierp: return Point::sierp(true);
    case SpaceId::NBar: return Point::nbar(i);
    case SpaceId::Cantor: return Point::sequence(s, cantor_string(i), 0);
    case SpaceId::Baire: return Point::sequence(s, baire_sequence(i), 0);
    case SpaceId::PowerN: return Point::finite_set(pown_set(i));
  }
  return Point{};
}

// ---------------------------------------------------------------------------
// Text syntax

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  if (s.empty() || s.size() > 19 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw PointError("expected a number in " + std::string(what) + ": '" + std::string(s) + "'");
  return std::stoull(std::string(s));
}

// an index written as digits or as program text
inline Natural parse_index(std::string_view s) {
  std::string t = trim(s);
  if (!t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return Natural::from_string(t);
  try {
    return encode(parse(t));
  } catch (const ParseError& e) {
    throw PointError("bad program in point: " + std::string(e.what()));
  }
}

// "0^5 1^w", "3 1 4^2 0^w", "0110 1^w" (bits may be run together in cantor)
inline Point parse_sequence(SpaceId space, std::string_view body) {
  std::string b = trim(body);
  if (b.rfind("prog(", 0) == 0 && b.back() == ')') return Point::backed(space, parse_index(b.substr(5, b.size() - 6)));
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < b.size()) {
    while (pos < b.size() && b[pos] == ' ') ++pos;
    std::size_t end = b.find(' ', pos);
    if (end == std::string::npos) end = b.size();
    if (end > pos) tokens.push_back(b.substr(pos, end - pos));
    pos = end;
  }
  if (tokens.empty()) throw PointError("empty sequence");
  std::vector<std::uint64_t> prefix;
  std::optional<std::uint64_t> tail;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (tail) throw PointError("nothing may follow an infinite repetition");
    const std::string& tok = tokens[t];
    std::size_t caret = tok.find('^');
    std::string head = caret == std::string::npos ? tok : tok.substr(0, caret);
    std::vector<std::uint64_t> unit;
    if (space == SpaceId::Cantor) {
      for (char c : head) {
        if (c != '0' && c != '1') throw PointError("cantor digits must be 0 or 1: '" + tok + "'");
        unit.push_back(static_cast<std::uint64_t>(c - '0'));
      }
      if (unit.empty()) throw PointError("empty segment");
    } else {
      unit.push_back(parse_u64(head, "baire value"));
    }
    if (caret == std::string::npos) {
      prefix.insert(prefix.end(), unit.begin(), unit.end());
      continue;
    }
    std::string rep = tok.substr(caret + 1);
    if (rep == "w") {
      if (unit.size() != 1) throw PointError("only a single symbol may repeat forever: '" + tok + "'");
      tail = unit[0];
      continue;
    }
    std::uint64_t k = parse_u64(rep, "repetition");
    if (k > 100000) throw PointError("repetition too long");
    for (std::uint64_t r = 0; r < k; ++r) prefix.insert(prefix.end(), unit.begin(), unit.end());
  }
  if (!tail) throw PointError("sequence must end with a repetition such as 0^w");
  return Point::sequence(space, prefix, *tail);
}

}  // namespace detail

/// Parses `nbar:5`, `nbar:inf`, `cantor:0^5 1^w`, `baire:3 1^w`,
/// `cantor:prog(E)`, `pown:{1,3}`, `pown:idx(E)`, `sierp:top|bot`.
inline Point parse_point(std::string_view text) {
  std::string s = detail::trim(text);
  std::size_t colon = s.find(':');
  if (colon == std::string::npos) throw PointError("point needs a space prefix such as nbar: ('" + s + "')");
  std::string space = s.substr(0, colon), body = detail::trim(s.substr(colon + 1));
  if (space == "sierp") {
    if (body == "top") return Point::sierp(true);
    if (body == "bot") return Point::sierp(false);
    throw PointError("sierp point must be top or bot");
  }
  if (space == "nbar") {
    if (body == "inf") return Point::nbar(std::nullopt);
    return Point::nbar(detail::parse_u64(body, "nbar point"));
  }
  if (space == "cantor") return detail::parse_sequence(SpaceId::Cantor, body);
  if (space == "baire") return detail::parse_sequence(SpaceId::Baire, body);
  if (space == "pown") {
    if (body.rfind("idx(", 0) == 0 && body.back() == ')')
      return Point::backed(SpaceId::PowerN, detail::parse_index(body.substr(4, body.size() - 5)));
    if (body.size() < 2 || body.front() != '{' || body.back() != '}')
      throw PointError("pown point must be {a,b,...} or idx(E)");
    std::vector<std::uint64_t> xs;
    std::string inner = detail::trim(body.substr(1, body.size() - 2));
    std::size_t pos = 0;
    while (!inner.empty() && pos <= inner.size()) {
      std::size_t comma = inner.find(',', pos);
      if (comma == std::string::npos) comma = inner.size();
      xs.push_back(detail::parse_u64(detail::trim(inner.substr(pos, comma - pos)), "pown element"));
      pos = comma + 1;
    }
    return Point::finite_set(xs);
  }
  throw PointError("unknown space '" + space + "'");
}

inline std::string to_text(const Point& p) {
  auto seq = [&]() {
    if (p.program) return std::string("prog(") + p.program->str() + ")";
    std::string out;
    for (std::size_t i = 0; i < p.prefix.size();) {
      std::size_t j = i;
      while (j < p.prefix.size() && p.prefix[j] == p.prefix[i]) ++j;
      out += std::to_string(p.prefix[i]) + "^" + std::to_string(j - i) + " ";
      i = j;
    }
    return out + std::to_string(p.tail) + "^w";
  };
  switch (p.space) {
    case SpaceId::Sierp: return p.top ? "sierp:top" : "sierp:bot";
    case SpaceId::NBar: return p.n ? "nbar:" + std::to_string(*p.n) : "nbar:inf";
    case SpaceId::Cantor: return "cantor:" + seq();
    case SpaceId::Baire: return "baire:" + seq();
    case SpaceId::PowerN: {
      if (p.program) return "pown:idx(" + p.program->str() + ")";
      std::string out = "pown:{";
      for (std::size_t i = 0; i < p.finite.size(); ++i) out += (i ? "," : "") + std::to_string(p.finite[i]);
      return out + "}";
    }
  }
  return "?";
}

}  // namespace cwb
