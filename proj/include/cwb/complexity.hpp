#pragma once

#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cwb/eval.hpp"
#include "cwb/programs.hpp"

namespace cwb {

enum class ComplexityKind { MinIndex, ProgramLength, Monotone };

inline const char* kind_name(ComplexityKind k) {
  switch (k) {
    case ComplexityKind::MinIndex: return "MinIndex";
    case ComplexityKind::ProgramLength: return "ProgramLength";
    case ComplexityKind::Monotone: return "Monotone";
  }
  return "?";
}

/// Upper bound of some complexity kind, valid from `stage` on.
struct ComplexityBound {
  ComplexityKind kind = ComplexityKind::MinIndex;
  Natural value;
  std::uint64_t stage = 0;
};

/// Bit length with bitlen(0) = 1.
inline std::uint64_t bitlen(std::uint64_t v) { return v == 0 ? 1 : 64 - static_cast<std::uint64_t>(__builtin_clzll(v)); }

namespace detail {

// Memo of runs of small codes on small inputs. A run is stored with the
// largest fuel tried; fuel monotonicity lets later queries reuse it.
class RunCache {
 public:
  static RunCache& get() {
    static RunCache c;
    return c;
  }

  EvalResult run(std::uint64_t e, std::uint64_t arg, std::uint64_t fuel) {
    std::uint64_t key = (e << 20) ^ arg;
    bool cacheable = e < (1ULL << 40) && arg < (1ULL << 20);
    if (cacheable) {
      std::lock_guard<std::mutex> lock(m_);
      auto it = map_.find(key);
      if (it != map_.end()) {
        const Entry& en = it->second;
        if (en.halted) return en.steps <= fuel ? EvalResult{true, en.value, en.steps} : EvalResult::out_of_fuel();
        if (en.fuel >= fuel) return EvalResult::out_of_fuel();
      }
    }
    EvalResult r = eval(Natural(e), arg, fuel);
    if (cacheable) {
      std::lock_guard<std::mutex> lock(m_);
      Entry& en = map_[key];
      if (r.halted) {
        en = Entry{true, r.value, r.steps, fuel};
      } else if (!en.halted && en.fuel < fuel) {
        en.fuel = fuel;
      }
    }
    return r;
  }

 private:
  struct Entry {
    bool halted = false;
    Natural value;
    std::uint64_t steps = 0;
    std::uint64_t fuel = 0;
  };
  std::mutex m_;
  std::unordered_map<std::uint64_t, Entry> map_;
};

inline bool generates(std::uint64_t e, const std::string& u, std::uint64_t fuel) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    EvalResult r = RunCache::get().run(e, i, fuel);
    if (!r.halted || r.value != Natural(static_cast<std::uint64_t>(u[i] - '0'))) return false;
  }
  return true;
}

// Same test for an arbitrary (possibly huge) code, without the memo.
inline bool generates_code(const Natural& e, const std::string& u, std::uint64_t fuel) {
  Term t = decode(e);
  for (std::size_t i = 0; i < u.size(); ++i) {
    EvalResult r = eval(t, i, fuel);
    if (!r.halted || r.value != Natural(static_cast<std::uint64_t>(u[i] - '0'))) return false;
  }
  return true;
}

inline std::optional<std::uint64_t> min_code_outputting(const Natural& n, std::uint64_t code_bound, std::uint64_t fuel) {
  for (std::uint64_t e = 0; e <= code_bound; ++e) {
    EvalResult r = RunCache::get().run(e, 0, fuel);
    if (r.halted && r.value == n) return e;
  }
  return std::nullopt;
}

}  // namespace detail

/// Complexity stage affordable within a step budget: codes <= r run for r
/// steps each cost at most r^2 <= budget.
inline std::uint64_t stage_within(std::uint64_t budget) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(budget)));
  while (r > 0 && r * r > budget) --r;
  while ((r + 1) * (r + 1) <= budget) ++r;
  return r;
}

/// min{e <= stage : eval(e,0,stage) = n}.
inline std::optional<std::uint64_t> c_upper(const Natural& n, std::uint64_t stage) {
  return detail::min_code_outputting(n, stage, stage);
}

/// Least bit length of a code e <= stage outputting n on 0 within stage steps.
inline std::optional<std::uint64_t> k_upper(const Natural& n, std::uint64_t stage) {
  auto c = c_upper(n, stage);
  if (!c) return std::nullopt;
  return bitlen(*c);
}

/// Least bit length of a code e <= stage whose outputs φ_e(0..|u|-1) spell u
/// (a string over '0'/'1'), each within stage steps.
inline std::optional<std::uint64_t> km_upper(const std::string& u, std::uint64_t stage) {
  for (std::uint64_t e = 0; e <= stage; ++e)
    if (detail::generates(e, u, stage)) return bitlen(e);
  return std::nullopt;
}

/// Exhaustive minimum over codes <= code_bound at the given fuel. The target
/// is a natural (MinIndex, ProgramLength) or a bit string (Monotone).
struct OracleTarget {
  Natural n;
  std::string bits;
};

inline std::optional<std::uint64_t> exact_oracle(ComplexityKind kind, const OracleTarget& target,
                                                 std::uint64_t code_bound, std::uint64_t fuel) {
  switch (kind) {
    case ComplexityKind::MinIndex: return detail::min_code_outputting(target.n, code_bound, fuel);
    case ComplexityKind::ProgramLength: {
      auto c = detail::min_code_outputting(target.n, code_bound, fuel);
      if (!c) return std::nullopt;
      return bitlen(*c);
    }
    case ComplexityKind::Monotone:
      for (std::uint64_t e = 0; e <= code_bound; ++e)
        if (detail::generates(e, target.bits, fuel)) return bitlen(e);
      return std::nullopt;
  }
  return std::nullopt;
}

/// Oracle value together with its fuel-stability check.
struct CertifiedValue {
  std::optional<std::uint64_t> value;
  bool stable = false;
  std::uint64_t fuel = 0;
};

inline CertifiedValue certified_oracle(ComplexityKind kind, const OracleTarget& target, std::uint64_t code_bound,
                                       std::uint64_t fuel) {
  auto a = exact_oracle(kind, target, code_bound, fuel);
  auto b = exact_oracle(kind, target, code_bound, 2 * fuel);
  return {a, a == b, fuel};
}

/// Complexity of ∞ ∈ ℕ̄: the code and bit length of its canonical name.
struct InfinityConstants {
  Natural c_inf;
  std::uint64_t k_inf = 0;
};

inline InfinityConstants infinity_constants() {
  const Natural& c = Programs::get().odd;
  return {c, c.bit_length()};
}

}  // namespace cwb
