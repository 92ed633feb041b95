#include <gtest/gtest.h>

#include <map>
#include <random>

#include "cwb/complexity.hpp"
#include "reference.hpp"

using namespace cwb;

namespace {

// Brute-force minimum with the reference interpreter.
std::optional<std::uint64_t> ref_min_index(std::uint64_t n, std::uint64_t bound, std::uint64_t fuel) {
  for (std::uint64_t e = 0; e <= bound; ++e) {
    auto r = ref::run(decode(Natural(e)), 0, fuel);
    if (r.halted && r.value == n) return e;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> ref_km(const std::string& u, std::uint64_t bound, std::uint64_t fuel) {
  for (std::uint64_t e = 0; e <= bound; ++e) {
    bool ok = true;
    for (std::size_t i = 0; i < u.size() && ok; ++i) {
      auto r = ref::run(decode(Natural(e)), i, fuel);
      ok = r.halted && r.value == (u[i] - '0');
    }
    if (ok) return bitlen(e);
  }
  return std::nullopt;
}

}  // namespace

TEST(CUpper, NoneAtStageZeroForPositiveTargets) {
  for (std::uint64_t n = 1; n < 10; ++n) EXPECT_FALSE(c_upper(n, 0).has_value());
}

TEST(CUpper, LiteralBound) {
  auto c = c_upper(5, 2000);
  ASSERT_TRUE(c);
  EXPECT_LE(Natural(*c), Natural(ref::code_of(Term::lit(5))));
}

TEST(CUpper, NonincreasingAcrossStages) {
  for (std::uint64_t n = 0; n <= 20; ++n) {
    std::optional<std::uint64_t> prev;
    for (std::uint64_t s : {10, 100, 1000}) {
      auto c = c_upper(n, s);
      if (prev) {
        ASSERT_TRUE(c);
        EXPECT_LE(*c, *prev);
      }
      if (c) prev = c;
    }
  }
}

TEST(KUpper, AtLeastOneAndBelowHandWrittenProgram) {
  auto k = k_upper(0, 1000);
  ASSERT_TRUE(k);
  EXPECT_GE(*k, 1u);
  EXPECT_LE(*k, mpz_sizeinbase(ref::code_of(Term::comp(Term::zero(), Term::id())).get_mpz_t(), 2));
}

TEST(RightCe, SeededTargetsConvergeToTheOracle) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    std::uint64_t n = rng() % 40;
    std::optional<std::uint64_t> prev;
    for (std::uint64_t s : {20, 60, 150, 400, 1000}) {
      auto c = c_upper(n, s);
      if (prev) {
        ASSERT_TRUE(c);
        EXPECT_LE(*c, *prev);
      }
      if (c) prev = c;
    }
    auto want = ref_min_index(n, 1000, 1000);
    EXPECT_EQ(prev, want) << n;
  }
}

TEST(Km, EmptyStringIsBelowEverything) {
  for (const char* u : {"0", "1", "01", "0000", "1010"}) {
    auto a = km_upper("", 500), b = km_upper(u, 500);
    ASSERT_TRUE(a);
    if (b) { EXPECT_LE(*a, *b); }
  }
  auto z = km_upper("0", 100);
  ASSERT_TRUE(z);
  EXPECT_LE(*z, bitlen(0));
}

TEST(Km, PrefixMonotoneAtFixedStage) {
  const char* strings[] = {"0",     "1",      "01",     "10",      "000000", "111111", "0101",
                           "0011",  "1100",   "010010", "0000001", "1000",   "0110",   "101",
                           "00100", "111000", "1",      "0001111", "10101",  "01110"};
  for (const char* s : strings) {
    std::string u(s);
    for (std::size_t len = 0; len < u.size(); ++len) {
      auto a = km_upper(u.substr(0, len), 300), b = km_upper(u, 300);
      if (b) {
        ASSERT_TRUE(a);
        EXPECT_LE(*a, *b) << u << " prefix " << len;
      }
    }
  }
}

TEST(Km, AgreesWithReferenceSearch) {
  for (const char* u : {"0", "1", "01", "10", "0000", "0101", "111"}) EXPECT_EQ(km_upper(u, 300), ref_km(u, 300, 300)) << u;
}

TEST(Km, ProgramLengthBoundsEveryPrefixOfItsSequence) {
  // x = 0 1 0 1 ... is generated by the parity program; each prefix is no harder
  Natural par = Prelude::get().parity;
  std::string x;
  for (int i = 0; i < 20; ++i) x += (i % 2 ? '1' : '0');
  for (std::size_t n = 0; n <= 20; ++n) EXPECT_TRUE(detail::generates_code(par, x.substr(0, n), 100000));
}

TEST(Oracle, ExactValuesAreFuelStable) {
  std::map<std::uint64_t, std::uint64_t> want = {{0, 0}, {1, 1}, {2, 10}, {7, 15}, {8, 16}, {19, 27}};
  for (auto [n, c] : want) {
    auto v = certified_oracle(ComplexityKind::MinIndex, {n, ""}, 200, 10000);
    EXPECT_TRUE(v.stable);
    ASSERT_TRUE(v.value);
    EXPECT_EQ(*v.value, c) << n;
    EXPECT_EQ(v.value, ref_min_index(n, 200, 10000));
  }
  EXPECT_FALSE(exact_oracle(ComplexityKind::MinIndex, {Natural(1000000), ""}, 100, 1000).has_value());
}

TEST(Oracle, MinimalIndicesAreOneToOne) {
  std::map<std::uint64_t, std::uint64_t> seen;
  for (std::uint64_t n = 0; n < 40; ++n) {
    auto v = exact_oracle(ComplexityKind::MinIndex, {n, ""}, 400, 4000);
    ASSERT_TRUE(v) << n;
    EXPECT_TRUE(seen.emplace(*v, n).second) << "collision at " << n;
  }
}

TEST(Oracle, ProgramLengthIsBitLengthOfMinIndex) {
  for (std::uint64_t n : {0, 3, 9}) {
    auto c = exact_oracle(ComplexityKind::MinIndex, {n, ""}, 200, 4000);
    auto k = exact_oracle(ComplexityKind::ProgramLength, {n, ""}, 200, 4000);
    ASSERT_TRUE(c && k);
    EXPECT_EQ(*k, bitlen(*c));
  }
}

TEST(Infinity, ConstantsAreDeterministic) {
  auto a = infinity_constants(), b = infinity_constants();
  EXPECT_EQ(a.c_inf, b.c_inf);
  EXPECT_EQ(a.k_inf, b.k_inf);
  EXPECT_EQ(a.k_inf, a.c_inf.bit_length());
  EXPECT_EQ(a.c_inf, Programs::get().odd);
}
