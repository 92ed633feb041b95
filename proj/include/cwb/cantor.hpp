#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cwb/lemma3.hpp"

namespace cwb {

/// Reads bits of a Cantor point off a name that lists cylinder codes.
/// `bit_queries` counts distinct bit positions asked for; `entries` counts
/// name entries pulled to answer them.
class BitReader {
 public:
  explicit BitReader(Type2Name name, std::uint64_t max_entries = 1 << 20)
      : name_(std::move(name)), max_entries_(max_entries) {}

  std::optional<std::uint64_t> bit(std::uint64_t i) {
    if (i >= asked_) asked_ = i + 1;
    while (known_.size() <= i) {
      if (entries_ >= max_entries_) return std::nullopt;
      Natural c = name_.nth(entries_++);
      // a cylinder longer than 2^20 bits is skipped; the name keeps listing shorter ones
      if (!c.is_small() && c.log2_approx() > (1 << 20)) continue;
      auto u = cantor_string(c);
      if (u.size() > known_.size()) known_ = u;
    }
    return known_[i];
  }

  std::uint64_t bit_queries() const { return asked_; }
  std::uint64_t entries() const { return entries_; }

 private:
  Type2Name name_;
  std::uint64_t max_entries_;
  std::vector<std::uint64_t> known_;
  std::uint64_t entries_ = 0, asked_ = 0;
};

struct CantorVerdict {
  bool accepted = false;
  std::uint64_t stage = 0;
  std::uint64_t bit_queries = 0;
  std::uint64_t scanned = 0;  // prefixes whose inequality was required
  std::string reason;
};

/// Staged Km upper bound affordable within `budget` steps for a string of
/// length |u|: codes up to r, each run on |u| inputs for r steps.
inline std::optional<std::uint64_t> km_within(const std::string& u, std::uint64_t budget) {
  return km_upper(u, stage_within(budget / (u.size() + 1)));
}

// ---------------------------------------------------------------------------
// Friedberg set in Cantor space: 0^ω together with the 0^n1... whose
// prefix 0^n1 has Km < log₂ n − 1.

/// K-mode semidecider: k bounds the program length of the point. Only the
/// first 2^{k+2} bits are read.
inline CantorVerdict friedberg_cantor(std::uint64_t k, const Type2Name& name, std::uint64_t budget) {
  if (k > 60) throw std::invalid_argument("k too large for the bit window");
  const std::uint64_t window = std::uint64_t(1) << (k + 2);
  BitReader r(name);
  std::optional<std::uint64_t> first_one;
  for (std::uint64_t i = 0; i < window && !first_one; ++i) {
    auto b = r.bit(i);
    if (!b) return {false, 0, r.bit_queries(), 0, "name stalled"};
    if (*b) first_one = i;
  }
  if (!first_one) return {true, 0, r.bit_queries(), 0, "all zeros in the window"};
  std::uint64_t n = *first_one;
  if (n < 2) return {false, budget, r.bit_queries(), 0, "log2(n) - 1 admits no program"};
  std::string u(n, '0');
  u += '1';
  const double bound = std::log2(static_cast<double>(n)) - 1;
  for (std::uint64_t s : stage_ladder(budget)) {
    auto km = km_within(u, s);
    if (km && static_cast<double>(*km) < bound) return {true, s, r.bit_queries(), 0, "short generator"};
  }
  return {false, budget, r.bit_queries(), 0, "no short generator within budget"};
}

// ---------------------------------------------------------------------------
// {x : ∀n Km(x↾n) < n/2 + c}, which is Π⁰₁ but not Σ⁰₂-on-K-names

/// c₀: least c with Km(0^n) < n/2 + c for every n <= 40, the staged bound
/// read at two stages and required to agree.
struct ConstantC0 {
  std::uint64_t value = 0;
  bool stable = false;
};

inline const ConstantC0& notsigma2_c0() {
  static const ConstantC0 c0 = [] {
    ConstantC0 out;
    out.stable = true;
    for (std::uint64_t n = 0; n <= 40; ++n) {
      std::string z(n, '0');
      auto a = km_upper(z, 64), b = km_upper(z, 128);
      if (!a || a != b) {
        out.stable = false;
        continue;
      }
      // smallest c with *a < n/2 + c, i.e. 2*a < n + 2c
      std::uint64_t c = 2 * *a >= n ? (2 * *a - n) / 2 + 1 : 0;
      out.value = std::max(out.value, c);
    }
    return out;
  }();
  return c0;
}

/// Scans n = 0..2(k−c); accepts once every Km(x↾n) < n/2 + c has fired.
inline CantorVerdict notsigma2_semidecider(std::uint64_t k, const Type2Name& name, std::uint64_t c,
                                           std::uint64_t budget) {
  if (c < notsigma2_c0().value) throw std::invalid_argument("c below c0");
  if (k < c) return {true, 0, 0, 0, "empty scan"};
  const std::uint64_t last = 2 * (k - c);
  BitReader r(name);
  std::string prefix;
  for (std::uint64_t i = 0; i < last; ++i) {
    auto b = r.bit(i);
    if (!b) return {false, 0, r.bit_queries(), 0, "name stalled"};
    prefix += *b ? '1' : '0';
  }
  std::vector<bool> fired(last + 1, false);
  std::uint64_t open = last + 1;
  for (std::uint64_t s : stage_ladder(budget)) {
    for (std::uint64_t n = 0; n <= last; ++n) {
      if (fired[n]) continue;
      auto km = km_within(prefix.substr(0, n), s);
      if (km && 2 * *km < n + 2 * c) {
        fired[n] = true;
        --open;
      }
    }
    if (open == 0) return {true, s, r.bit_queries(), last + 1, "all inequalities fired"};
  }
  return {false, budget, r.bit_queries(), last + 1, "some inequality still open"};
}

}  // namespace cwb
