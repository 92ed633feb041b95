#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cwb/natural.hpp"

namespace cwb {

/// Constructors of the program language, in tag order.
enum class Op : std::uint8_t { Zero, Succ, Pred, Id, Fst, Snd, Lit, Pair, Comp, If0, Mu, Univ, Clock };

const char* op_name(Op op);

class Term;

namespace detail {
struct TermNode {
  Op op;
  Natural lit;
  std::shared_ptr<const TermNode> a, b, c;
  std::size_t size = 1;
  mutable std::once_flag code_once;
  mutable Natural code;
};
}  // namespace detail

/// Immutable program term; cheap to copy.
class Term {
 public:
  Term() : Term(Op::Zero) {}

  static Term zero() { return Term(Op::Zero); }
  static Term succ() { return Term(Op::Succ); }
  static Term pred() { return Term(Op::Pred); }
  static Term id() { return Term(Op::Id); }
  static Term fst() { return Term(Op::Fst); }
  static Term snd() { return Term(Op::Snd); }
  static Term univ() { return Term(Op::Univ); }
  static Term clock() { return Term(Op::Clock); }
  static Term lit(Natural n);
  static Term pair(Term f, Term g);
  static Term comp(Term f, Term g);
  static Term if0(Term c, Term t, Term e);
  static Term mu(Term t);

  Op op() const { return n_->op; }
  const Natural& literal() const { return n_->lit; }
  Term a() const { return Term(n_->a); }
  Term b() const { return Term(n_->b); }
  Term c() const { return Term(n_->c); }
  /// Number of constructor nodes.
  std::size_t size() const { return n_->size; }
  const detail::TermNode* raw() const { return n_.get(); }
  const std::shared_ptr<const detail::TermNode>& ptr() const { return n_; }

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }

  explicit Term(std::shared_ptr<const detail::TermNode> n) : n_(std::move(n)) {}

 private:
  explicit Term(Op op);
  std::shared_ptr<const detail::TermNode> n_;
};

/// Gödel number of a term.
Natural encode(const Term& t);
/// Total inverse of encode.
Term decode(const Natural& n);

/// Printing uses the s-expression grammar
/// `zero|succ|pred|id|fst|snd|univ|clock|(lit N)|(pair t t)|(comp t t)|(if0 t t t)|(mu t)`.
std::string print(const Term& t);

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error("parse error at offset " + std::to_string(pos) + ": " + msg), position(pos) {}
};

Term parse(std::string_view text);

// ---------------------------------------------------------------------------

inline const char* op_name(Op op) {
  switch (op) {
    case Op::Zero: return "zero";
    case Op::Succ: return "succ";
    case Op::Pred: return "pred";
    case Op::Id: return "id";
    case Op::Fst: return "fst";
    case Op::Snd: return "snd";
    case Op::Lit: return "lit";
    case Op::Pair: return "pair";
    case Op::Comp: return "comp";
    case Op::If0: return "if0";
    case Op::Mu: return "mu";
    case Op::Univ: return "univ";
    case Op::Clock: return "clock";
  }
  return "?";
}

namespace detail {

// Nullary constructors in code order; index into this table is the squeezed code r.
inline constexpr Op kNullary[] = {Op::Zero, Op::Succ, Op::Pred, Op::Id, Op::Fst, Op::Snd, Op::Univ, Op::Clock};
inline constexpr std::uint64_t kNullaryCount = sizeof(kNullary) / sizeof(kNullary[0]);

inline std::uint64_t nullary_rank(Op op) {
  for (std::uint64_t i = 0; i < kNullaryCount; ++i)
    if (kNullary[i] == op) return i;
  throw std::logic_error("not nullary");
}

inline std::shared_ptr<const TermNode> make_node(Op op, Natural lit, std::shared_ptr<const TermNode> a,
                                                 std::shared_ptr<const TermNode> b,
                                                 std::shared_ptr<const TermNode> c) {
  auto n = std::make_shared<TermNode>();
  n->op = op;
  n->lit = std::move(lit);
  n->size = 1 + (a ? a->size : 0) + (b ? b->size : 0) + (c ? c->size : 0);
  n->a = std::move(a);
  n->b = std::move(b);
  n->c = std::move(c);
  return n;
}

inline const std::shared_ptr<const TermNode>& nullary_node(Op op) {
  static const std::shared_ptr<const TermNode> table[] = {
      make_node(Op::Zero, 0, nullptr, nullptr, nullptr), make_node(Op::Succ, 0, nullptr, nullptr, nullptr),
      make_node(Op::Pred, 0, nullptr, nullptr, nullptr), make_node(Op::Id, 0, nullptr, nullptr, nullptr),
      make_node(Op::Fst, 0, nullptr, nullptr, nullptr),  make_node(Op::Snd, 0, nullptr, nullptr, nullptr),
      make_node(Op::Univ, 0, nullptr, nullptr, nullptr), make_node(Op::Clock, 0, nullptr, nullptr, nullptr)};
  return table[nullary_rank(op)];
}

struct SmallDecodeCache {
  std::mutex m;
  std::unordered_map<std::uint64_t, std::shared_ptr<const TermNode>> map;
};

inline SmallDecodeCache& small_cache() {
  static SmallDecodeCache c;
  return c;
}

// Pair, Comp, If0 and Mu own raw Cantor columns 7..10. Every other column t
// is squeezed to c (t for t <= 6, t-4 above) and r = <c,p> indexes the
// nullary constructors (r < 8) followed by Lit(r-8). All steps are
// structural, so huge codes are never materialized.
inline bool small_leq(const Natural& n, std::uint64_t k) { return n.is_small() && n.u64() <= k; }

inline Natural add_small(Natural n, std::uint64_t k) {
  while (k-- > 0) n = n.succ();
  return n;
}

inline Natural sub_small(Natural n, std::uint64_t k) {
  while (k-- > 0) n = n.pred();
  return n;
}

inline Natural column_code(const Natural& r) {
  auto [c, p] = unpair(r);
  return pair(small_leq(c, 6) ? c : add_small(c, 4), p);
}

std::shared_ptr<const TermNode> decode_node(const Natural& n);

inline void attach(const Natural& code, const std::shared_ptr<const TermNode>& t) {
  if (const Node* node = code.node()) {
    std::lock_guard<std::mutex> lock(memo_mutex());
    if (!node->memo) node->memo = t;
  }
}

inline std::shared_ptr<const TermNode> decode_uncached(const Natural& n) {
  auto [t, p] = unpair(n);
  if (t.is_small() && t.u64() >= 7 && t.u64() <= 10) {
    switch (t.u64()) {
      case 7:
      case 8: {
        auto [x, y] = unpair(p);
        return make_node(t.u64() == 7 ? Op::Pair : Op::Comp, 0, decode_node(x), decode_node(y), nullptr);
      }
      case 9: {
        auto [x, yz] = unpair(p);
        auto [y, z] = unpair(yz);
        return make_node(Op::If0, 0, decode_node(x), decode_node(y), decode_node(z));
      }
      default: return make_node(Op::Mu, 0, decode_node(p), nullptr, nullptr);
    }
  }
  Natural r = pair(small_leq(t, 6) ? t : sub_small(t, 4), p);
  if (small_leq(r, kNullaryCount - 1)) return nullary_node(kNullary[r.u64()]);
  return make_node(Op::Lit, sub_small(r, kNullaryCount), nullptr, nullptr, nullptr);
}

inline std::shared_ptr<const TermNode> decode_node(const Natural& n) {
  if (n.is_small()) {
    auto& cache = small_cache();
    {
      std::lock_guard<std::mutex> lock(cache.m);
      auto it = cache.map.find(n.u64());
      if (it != cache.map.end()) return it->second;
    }
    auto t = decode_uncached(n);
    std::lock_guard<std::mutex> lock(cache.m);
    if (cache.map.size() > (1u << 20)) cache.map.clear();
    cache.map.emplace(n.u64(), t);
    return t;
  }
  {
    std::lock_guard<std::mutex> lock(memo_mutex());
    if (n.node()->memo) return std::static_pointer_cast<const TermNode>(n.node()->memo);
  }
  auto t = decode_uncached(n);
  attach(n, t);
  return t;
}

inline Natural encode_node(const TermNode* t);

inline Natural compute_code(const TermNode* t) {
  switch (t->op) {
    case Op::Lit: return column_code(add_small(t->lit, kNullaryCount));
    case Op::Pair: return pair(7, pair(encode_node(t->a.get()), encode_node(t->b.get())));
    case Op::Comp: return pair(8, pair(encode_node(t->a.get()), encode_node(t->b.get())));
    case Op::If0:
      return pair(9, pair(encode_node(t->a.get()), pair(encode_node(t->b.get()), encode_node(t->c.get()))));
    case Op::Mu: return pair(10, encode_node(t->a.get()));
    default: return column_code(nullary_rank(t->op));
  }
}

inline Natural encode_node(const TermNode* t) {
  std::call_once(t->code_once, [t] { t->code = compute_code(t); });
  return t->code;
}

}  // namespace detail

inline Term::Term(Op op) : n_(detail::nullary_node(op)) {}

inline Term Term::lit(Natural n) { return Term(detail::make_node(Op::Lit, std::move(n), nullptr, nullptr, nullptr)); }
inline Term Term::pair(Term f, Term g) { return Term(detail::make_node(Op::Pair, 0, f.n_, g.n_, nullptr)); }
inline Term Term::comp(Term f, Term g) { return Term(detail::make_node(Op::Comp, 0, f.n_, g.n_, nullptr)); }
inline Term Term::if0(Term c, Term t, Term e) { return Term(detail::make_node(Op::If0, 0, c.n_, t.n_, e.n_)); }
inline Term Term::mu(Term t) { return Term(detail::make_node(Op::Mu, 0, t.n_, nullptr, nullptr)); }

inline bool Term::operator==(const Term& o) const {
  if (n_ == o.n_) return true;
  if (n_->op != o.n_->op || n_->size != o.n_->size) return false;
  switch (n_->op) {
    case Op::Lit: return n_->lit == o.n_->lit;
    case Op::Pair:
    case Op::Comp: return a() == o.a() && b() == o.b();
    case Op::If0: return a() == o.a() && b() == o.b() && c() == o.c();
    case Op::Mu: return a() == o.a();
    default: return true;
  }
}

inline Natural encode(const Term& t) {
  Natural code = detail::encode_node(t.raw());
  return code;
}

inline Term decode(const Natural& n) { return Term(detail::decode_node(n)); }

namespace detail {
inline void print_into(const Term& t, std::string& out) {
  switch (t.op()) {
    case Op::Lit:
      out += "(lit ";
      out += t.literal().str();
      out += ')';
      return;
    case Op::Pair:
    case Op::Comp:
      out += '(';
      out += op_name(t.op());
      out += ' ';
      print_into(t.a(), out);
      out += ' ';
      print_into(t.b(), out);
      out += ')';
      return;
    case Op::If0:
      out += "(if0 ";
      print_into(t.a(), out);
      out += ' ';
      print_into(t.b(), out);
      out += ' ';
      print_into(t.c(), out);
      out += ')';
      return;
    case Op::Mu:
      out += "(mu ";
      print_into(t.a(), out);
      out += ')';
      return;
    default: out += op_name(t.op());
  }
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Term parse_all() {
    Term t = term();
    skip();
    if (i_ != s_.size()) throw ParseError("trailing input", i_);
    return t;
  }

 private:
  void skip() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\n' || s_[i_] == '\r')) ++i_;
  }
  std::string_view word() {
    skip();
    std::size_t st = i_;
    while (i_ < s_.size() && ((s_[i_] >= 'a' && s_[i_] <= 'z') || (s_[i_] >= '0' && s_[i_] <= '9'))) ++i_;
    return s_.substr(st, i_ - st);
  }
  void expect(char c) {
    skip();
    if (i_ >= s_.size() || s_[i_] != c) throw ParseError(std::string("expected '") + c + "'", i_);
    ++i_;
  }
  Term term() {
    skip();
    if (i_ >= s_.size()) throw ParseError("unexpected end of input", i_);
    if (s_[i_] == '(') {
      ++i_;
      std::size_t at = i_;
      std::string_view head = word();
      Term out;
      if (head == "lit") {
        skip();
        std::size_t st = i_;
        std::string_view num = word();
        if (num.empty() || num.find_first_not_of("0123456789") != std::string_view::npos)
          throw ParseError("expected natural literal", st);
        out = Term::lit(Natural::from_string(num));
      } else if (head == "pair" || head == "comp") {
        Term f = term();
        Term g = term();
        out = head == "pair" ? Term::pair(f, g) : Term::comp(f, g);
      } else if (head == "if0") {
        Term c = term();
        Term t = term();
        Term e = term();
        out = Term::if0(c, t, e);
      } else if (head == "mu") {
        out = Term::mu(term());
      } else {
        throw ParseError("unknown form '" + std::string(head) + "'", at);
      }
      expect(')');
      return out;
    }
    std::size_t at = i_;
    std::string_view w = word();
    for (Op op : kNullary)
      if (w == op_name(op)) return Term(nullary_node(op));
    throw ParseError(w.empty() ? "unexpected character" : "unknown atom '" + std::string(w) + "'", at);
  }

  std::string_view s_;
  std::size_t i_ = 0;
};
}  // namespace detail

inline std::string print(const Term& t) {
  std::string out;
  detail::print_into(t, out);
  return out;
}

inline Term parse(std::string_view text) { return detail::Parser(text).parse_all(); }

}  // namespace cwb
