#include <gtest/gtest.h>

#include <cmath>

#include "cwb/cantor.hpp"
#include "reference.hpp"

using namespace cwb;

namespace {

std::uint64_t bits(std::uint64_t v) {
  std::uint64_t b = 1;
  while (v >>= 1) ++b;
  return b;
}

// whether code e spells u on inputs 0..|u|-1, by the GMP interpreter
bool ref_generates(std::uint64_t e, const std::string& u, std::uint64_t fuel) {
  Term t = decode(Natural(e));
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto r = ref::run(t, i, fuel);
    if (!r.halted || r.value != (u[i] - '0')) return false;
  }
  return true;
}

std::optional<std::uint64_t> ref_km(const std::string& u, std::uint64_t bound, std::uint64_t fuel) {
  for (std::uint64_t e = 0; e <= bound; ++e)
    if (ref_generates(e, u, fuel)) return bits(e);
  return std::nullopt;
}

Type2Name name_of(const std::string& text) { return point_filter(parse_point(text)); }

}  // namespace

TEST(FriedbergCantor, ZerosAcceptedWithinTheBitWindow) {
  for (std::uint64_t k : {4, 6, 8}) {
    auto v = friedberg_cantor(k, name_of("cantor:0^w"), 1000000);
    EXPECT_TRUE(v.accepted) << k;
    EXPECT_LE(v.bit_queries, std::uint64_t(1) << (k + 2)) << k;
  }
}

TEST(FriedbergCantor, NoShortGeneratorMeansNoVerdict) {
  for (std::uint64_t n : {5, 20, 100}) {
    std::string u(n, '0');
    u += '1';
    // every code shorter than log2(n) - 1 bits, at fuel 10^5
    std::uint64_t limit = 0;
    while (static_cast<double>(bits(limit + 1)) < std::log2(double(n)) - 1) ++limit;
    for (std::uint64_t e = 0; e <= limit; ++e) EXPECT_FALSE(ref_generates(e, u, 100000)) << e;
    auto v = friedberg_cantor(8, name_of("cantor:0^" + std::to_string(n) + " 1^w"), 1000000);
    EXPECT_FALSE(v.accepted) << n;
    EXPECT_EQ(v.bit_queries, n + 1);
  }
}

TEST(FriedbergCantor, LeadingOneIsNeverAccepted) {
  EXPECT_FALSE(friedberg_cantor(4, name_of("cantor:1^w"), 100000).accepted);
}

TEST(NotSigma2, ConstantMatchesBruteForce) {
  std::uint64_t want = 0;
  for (std::uint64_t n = 0; n <= 40; ++n) {
    auto km = ref_km(std::string(n, '0'), 64, 10000);
    ASSERT_TRUE(km.has_value()) << n;
    while (2 * *km >= n + 2 * want) ++want;
  }
  EXPECT_TRUE(notsigma2_c0().stable);
  EXPECT_EQ(notsigma2_c0().value, want);
}

TEST(NotSigma2, ZerosAcceptedWithExactScanLength) {
  const std::uint64_t c0 = notsigma2_c0().value;
  for (std::uint64_t k = c0; k <= c0 + 6; ++k) {
    auto v = notsigma2_semidecider(k, name_of("cantor:0^w"), c0, 1000000);
    EXPECT_TRUE(v.accepted) << k;
    EXPECT_EQ(v.scanned, 2 * (k - c0) + 1) << k;
  }
  EXPECT_THROW(notsigma2_semidecider(5, name_of("cantor:0^w"), c0 - 1, 1000), std::invalid_argument);
}
