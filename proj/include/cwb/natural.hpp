#pragma once

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

namespace cwb {

namespace detail {
struct Node;
}  // namespace detail

/// Unbounded natural number.
///
/// Values below 2^64 are stored inline. Every larger value is kept in a
/// canonical form: a shared node holding its Cantor projections (x, y), each
/// again inline or a node. Program codes nest pairs deeply and their bit
/// length doubles with every level, so the numeric value is only materialized
/// on demand (ordering, printing). Equality, hashing, projections, successor
/// and predecessor all work on the tree.
class Natural {
 public:
  Natural() = default;
  template <std::integral T>
  Natural(T v) : small_(static_cast<std::uint64_t>(v)) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_signed_v<T>)
      if (v < 0) throw std::invalid_argument("negative natural");
  }
  explicit Natural(const mpz_class& v);

  static Natural from_string(std::string_view text);

  bool is_small() const { return !node_; }
  bool is_zero() const { return !node_ && small_ == 0; }
  std::uint64_t u64() const {
    if (node_) throw std::overflow_error("natural does not fit in 64 bits");
    return small_;
  }
  /// Clamps to UINT64_MAX for large values; used for budgets and stages.
  std::uint64_t saturate() const { return node_ ? UINT64_MAX : small_; }

  mpz_class to_mpz() const;
  std::string str() const;
  /// Number of binary digits; bitlen(0) = 1. Saturates at SIZE_MAX.
  std::size_t bit_length() const;
  /// log2 of the value, approximately; finite even when bit_length saturates.
  long double log2_approx() const;

  Natural succ() const;
  /// Truncated predecessor.
  Natural pred() const;

  bool operator==(const Natural& o) const;
  bool operator!=(const Natural& o) const { return !(*this == o); }
  int compare(const Natural& o) const;
  bool operator<(const Natural& o) const { return compare(o) < 0; }
  bool operator<=(const Natural& o) const { return compare(o) <= 0; }
  bool operator>(const Natural& o) const { return compare(o) > 0; }
  bool operator>=(const Natural& o) const { return compare(o) >= 0; }
  std::size_t hash() const;

  const detail::Node* node() const { return node_.get(); }

 private:
  friend Natural pair(const Natural& x, const Natural& y);
  friend std::pair<Natural, Natural> unpair(const Natural& n);
  std::uint64_t small_ = 0;
  std::shared_ptr<const detail::Node> node_;
};

/// Cantor pairing <x,y> = (x+y)(x+y+1)/2 + y.
Natural pair(const Natural& x, const Natural& y);
std::pair<Natural, Natural> unpair(const Natural& n);
inline Natural fst(const Natural& n) { return unpair(n).first; }
inline Natural snd(const Natural& n) { return unpair(n).second; }

namespace detail {

std::mutex& memo_mutex();

struct Node {
  Natural a, b;
  std::size_t hash = 0;
  mutable std::once_flag value_once;
  mutable mpz_class value;
  // successor and predecessor rebuild a path through the tree; memoizing
  // them keeps repeated arithmetic on the same large value linear
  mutable std::once_flag succ_once, pred_once;
  mutable Natural succ_memo, pred_memo;
  // decoded term, guarded by memo_mutex
  mutable std::shared_ptr<const void> memo;
  // value ≈ mant · 2^exp with mant in [1,2), for bit lengths without the value
  mutable std::once_flag approx_once;
  mutable long double mant = 1;
  mutable long double exp = 0;

  const mpz_class& get() const;
  void approx() const;
};

inline std::mutex& memo_mutex() {
  static std::mutex m;
  return m;
}

inline mpz_class pair_mpz(const mpz_class& x, const mpz_class& y) {
  mpz_class s = x + y;
  mpz_class r = s * (s + 1);
  r >>= 1;
  r += y;
  return r;
}

inline void unpair_mpz(const mpz_class& n, mpz_class& x, mpz_class& y) {
  mpz_class t = 8 * n + 1;
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), t.get_mpz_t());
  mpz_class w = (r - 1) / 2;
  mpz_class tri = w * (w + 1) / 2;
  y = n - tri;
  x = w - y;
}

inline const mpz_class& Node::get() const {
  std::call_once(value_once, [this] { value = pair_mpz(a.to_mpz(), b.to_mpz()); });
  return value;
}

struct Approx {
  long double m;  // in [1,2), or 0 for zero
  long double e;  // exponents of deep codes overflow every integer type
};

inline Approx normalize(long double m, long double e) {
  if (m == 0) return {0, 0};
  int k;
  long double f = std::frexp(m, &k);  // f in [0.5,1)
  return {f * 2, e + k - 1};
}

inline Approx approx_of(const Natural& n);

inline Approx add(Approx a, Approx b) {
  if (a.m == 0) return b;
  if (b.m == 0) return a;
  if (a.e < b.e) std::swap(a, b);
  long double d = a.e - b.e;
  if (d > 80) return a;
  return normalize(a.m + std::ldexp(b.m, static_cast<int>(-d)), a.e);
}

inline Approx mul(Approx a, Approx b) {
  if (a.m == 0 || b.m == 0) return {0, 0};
  return normalize(a.m * b.m, a.e + b.e);
}

inline void Node::approx() const {
  std::call_once(approx_once, [this] {
    // <a,b> = s(s+1)/2 + b with s = a+b
    Approx s = add(approx_of(a), approx_of(b));
    Approx t = mul(s, add(s, {1, 0}));
    t.e -= 1;
    Approx v = add(t, approx_of(b));
    mant = v.m;
    exp = v.e;
  });
}

inline Approx approx_of(const Natural& n) {
  if (n.is_small()) return normalize(static_cast<long double>(n.u64()), 0);
  n.node()->approx();
  return {n.node()->mant, n.node()->exp};
}

inline std::uint64_t isqrt_u128(unsigned __int128 v) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(v)));
  auto sq = [](std::uint64_t x) { return static_cast<unsigned __int128>(x) * x; };
  while (r > 0 && sq(r) > v) --r;
  while (r < UINT64_MAX && sq(r + 1) <= v) ++r;
  return r;
}

inline std::size_t mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace detail

inline Natural::Natural(const mpz_class& v) {
  if (sgn(v) < 0) throw std::invalid_argument("negative natural");
  if (mpz_sizeinbase(v.get_mpz_t(), 2) <= 64) {
    mpz_class hi = v >> 32;
    mpz_class lo = v - (hi << 32);
    small_ = (static_cast<std::uint64_t>(hi.get_ui()) << 32) | lo.get_ui();
    return;
  }
  mpz_class x, y;
  detail::unpair_mpz(v, x, y);
  *this = pair(Natural(x), Natural(y));
}

inline Natural Natural::from_string(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  for (char c : text)
    if (c < '0' || c > '9') throw std::invalid_argument("not a natural: " + std::string(text));
  return Natural(mpz_class(std::string(text), 10));
}

inline mpz_class Natural::to_mpz() const {
  if (!node_) {
    mpz_class r(static_cast<unsigned long>(small_ >> 32));
    r <<= 32;
    r += static_cast<unsigned long>(small_ & 0xffffffffULL);
    return r;
  }
  return node_->get();
}

inline std::string Natural::str() const {
  if (!node_) return std::to_string(small_);
  return node_->get().get_str(10);
}

inline std::size_t Natural::bit_length() const {
  if (!node_) {
    if (small_ == 0) return 1;
    return 64 - static_cast<std::size_t>(__builtin_clzll(small_));
  }
  // the estimate carries a relative error far below 1e-15; only a mantissa
  // next to a power of two needs the exact value
  node_->approx();
  long double m = node_->mant, e = node_->exp;
  if (e >= 1e18L) return SIZE_MAX;
  if (m > 1.0L + 1e-15L && m < 2.0L - 1e-15L) return static_cast<std::size_t>(e) + 1;
  return mpz_sizeinbase(node_->get().get_mpz_t(), 2);
}

inline long double Natural::log2_approx() const {
  if (!node_) return small_ == 0 ? 0.0L : std::log2(static_cast<long double>(small_));
  node_->approx();
  return node_->exp + std::log2(node_->mant);
}

inline Natural Natural::succ() const {
  if (!node_) {
    if (small_ != UINT64_MAX) return Natural(small_ + 1);
    return Natural(to_mpz() + 1);
  }
  // <u,v>+1 = <u-1,v+1> inside a diagonal, <v+1,0> when leaving it
  const detail::Node* n = node_.get();
  std::call_once(n->succ_once, [n] {
    n->succ_memo = n->a.is_zero() ? pair(n->b.succ(), 0) : pair(n->a.pred(), n->b.succ());
  });
  return n->succ_memo;
}

inline Natural Natural::pred() const {
  if (!node_) return Natural(small_ == 0 ? 0 : small_ - 1);
  const detail::Node* n = node_.get();
  std::call_once(n->pred_once, [n] {
    n->pred_memo = n->b.is_zero() ? pair(0, n->a.pred()) : pair(n->a.succ(), n->b.pred());
  });
  return n->pred_memo;
}

inline bool Natural::operator==(const Natural& o) const {
  if (!node_ || !o.node_) return !node_ && !o.node_ && small_ == o.small_;
  if (node_ == o.node_) return true;
  if (node_->hash != o.node_->hash) return false;
  return node_->a == o.node_->a && node_->b == o.node_->b;
}

inline int Natural::compare(const Natural& o) const {
  if (!node_ && !o.node_) return small_ < o.small_ ? -1 : (small_ > o.small_ ? 1 : 0);
  if (!node_) return -1;  // nodes always hold values >= 2^64
  if (!o.node_) return 1;
  if (*this == o) return 0;
  int c = cmp(node_->get(), o.node_->get());
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

inline std::size_t Natural::hash() const {
  if (!node_) return std::hash<std::uint64_t>{}(small_);
  return node_->hash;
}

inline Natural pair(const Natural& x, const Natural& y) {
  if (x.is_small() && y.is_small()) {
    unsigned __int128 s = static_cast<unsigned __int128>(x.small_) + y.small_;
    if (s < (static_cast<unsigned __int128>(1) << 63)) {
      unsigned __int128 r = s * (s + 1) / 2 + y.small_;
      if (r <= UINT64_MAX) return Natural(static_cast<std::uint64_t>(r));
    }
  }
  auto n = std::make_shared<detail::Node>();
  n->a = x;
  n->b = y;
  n->hash = detail::mix(detail::mix(0x51ed270b2f1b6f1dULL, x.hash()), y.hash());
  Natural out;
  out.node_ = std::move(n);
  return out;
}

inline std::pair<Natural, Natural> unpair(const Natural& n) {
  if (n.is_small()) {
    std::uint64_t v = n.small_;
    unsigned __int128 t = static_cast<unsigned __int128>(v) * 8 + 1;
    std::uint64_t r = detail::isqrt_u128(t);
    std::uint64_t w = (r - 1) / 2;
    unsigned __int128 tri = static_cast<unsigned __int128>(w) * (w + 1) / 2;
    auto y = static_cast<std::uint64_t>(v - tri);
    return {Natural(w - y), Natural(y)};
  }
  return {n.node_->a, n.node_->b};
}

inline std::string to_string(const Natural& n) { return n.str(); }

}  // namespace cwb

template <>
struct std::hash<cwb::Natural> {
  std::size_t operator()(const cwb::Natural& n) const { return n.hash(); }
};
