#include <gtest/gtest.h>

#include <chrono>
#include <set>

#include "cwb/nbar.hpp"
#include "reference.hpp"

using namespace cwb;

namespace {

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// least code <= bound whose run on 0 outputs x, by the GMP interpreter
std::optional<std::uint64_t> ref_min_index(std::uint64_t x, std::uint64_t bound, std::uint64_t fuel) {
  for (std::uint64_t e = 0; e <= bound; ++e) {
    auto r = ref::run(decode(Natural(e)), 0, fuel);
    if (r.halted && r.value == x) return e;
  }
  return std::nullopt;
}

// the same minimum, required to agree at double fuel
std::uint64_t stable_min_index(std::uint64_t x) {
  auto a = ref_min_index(x, 2000, 20000);
  auto b = ref_min_index(x, 2000, 40000);
  EXPECT_TRUE(a.has_value()) << x;
  EXPECT_EQ(a, b) << "unstable at " << x;
  return a.value_or(0);
}

std::uint64_t bits(std::uint64_t v) {
  std::uint64_t b = 1;
  while (v >>= 1) ++b;
  return b;
}

std::uint64_t order_ref(std::uint64_t n) {
  if (n < 24) return 2;
  std::uint64_t l = 0;
  while ((n >> (l + 1)) != 0) ++l;
  return l + 4;
}

// x ∈ A iff K(x) < h(x)
bool friedberg_member(std::uint64_t x) { return bits(stable_min_index(x)) < order_ref(x); }

bool nbar_filter_has(std::uint64_t x, std::uint64_t c) { return c % 2 ? c / 2 <= x : c / 2 == x; }

const Natural& loop() {
  static const Natural l = encode(dsl::mu(dsl::succ()));
  return l;
}

}  // namespace

TEST(Friedberg, OrderProgramMatchesFormula) {
  NBarFriedberg F(curated_friedberg().h);
  for (std::uint64_t n = 0; n < 200; ++n) EXPECT_EQ(F.h(n), order_ref(n)) << n;
  EXPECT_EQ(F.threshold(1), 0u);
  EXPECT_EQ(F.threshold(6), 24u);
  EXPECT_EQ(F.threshold(8), 32u);
  EXPECT_EQ(F.threshold(9), 64u);
}

TEST(Friedberg, CuratedCodesDescribeTheSet) {
  const auto& F = curated_friedberg();
  for (std::uint64_t x : {0, 1, 2, 5, 12, 20, 23, 24, 30, 40}) {
    bool in_codes = false;
    for (auto c : F.codes) in_codes = in_codes || nbar_filter_has(x, c);
    EXPECT_EQ(in_codes, friedberg_member(x)) << x;
  }
}

TEST(Friedberg, MarkovSemidecidableToKTrivialOnTenPoints) {
  auto t0 = std::chrono::steady_clock::now();
  const auto& F = curated_friedberg();
  std::vector<std::uint64_t> pts = {0, 1, 2, 5, 12, 20, 23, 24, 30, 40};
  std::vector<Natural> uni;
  for (auto x : pts) uni.push_back(Programs::nbar_name(x));
  MarkovToK M(StagedSet{F.index_set}, SpaceId::NBar, uni);
  const std::uint64_t B = 1000000;
  for (auto x : pts) {
    std::uint64_t c = stable_min_index(x);
    auto lib = certified_oracle(ComplexityKind::MinIndex, {x, ""}, 2000, 20000);
    EXPECT_TRUE(lib.stable);
    EXPECT_EQ(lib.value, c);
    auto name = point_filter(Point::nbar(x));
    if (friedberg_member(x)) {
      auto v = M.run(c, name, B);
      EXPECT_TRUE(v.accepted) << x;
      EXPECT_LE(v.stage, B);
    } else {
      // stage 10B alone; emissions only grow, so earlier stages are silent too
      EXPECT_FALSE(M.run_at(c, name, 10 * B).accepted) << x;
    }
  }
  EXPECT_LT(since(t0), 300.0);
}

TEST(Friedberg, KModeSemidecider) {
  NBarFriedberg F(curated_friedberg().h);
  for (std::uint64_t x : {0, 1, 2, 5, 24, 30}) {
    auto v = F.run(bits(stable_min_index(x)), point_filter(Point::nbar(x)), 1000000);
    EXPECT_EQ(v.accepted, friedberg_member(x)) << x;
  }
  EXPECT_TRUE(F.run(5, point_filter(Point::nbar(std::nullopt)), 100000).accepted);
}

TEST(FriedbergOrder, TailsOfTheOrderStayInside) {
  auto t0 = std::chrono::steady_clock::now();
  MarkovToK M(StagedSet{curated_friedberg().index_set}, SpaceId::NBar, {Programs::get().odd});
  auto fo = friedberg_order(M, 3, 1000000);
  ASSERT_EQ(fo.p.size(), 4u);
  for (std::size_t i = 1; i < fo.p.size(); ++i) EXPECT_LT(fo.p[i - 1], fo.p[i]);
  auto h_ref = [&](std::uint64_t n) {
    std::uint64_t i = 0;
    while (i < fo.p.size() && fo.p[i] <= n) ++i;
    return i;
  };
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> pick(0, fo.p.back() + 40);
  for (int j = 0; j < 10; ++j) {
    std::uint64_t x = j < 5 ? fo.p.back() + j : pick(rng);
    auto h = eval(fo.h, x, 100000);
    ASSERT_TRUE(h.halted);
    EXPECT_EQ(h.value, Natural(h_ref(x))) << x;
    // x beyond p(k) with C(x) <= k lies in A; so does every x with C(x) < h(x)
    for (std::size_t k = 0; k < fo.p.size(); ++k) {
      if (x >= fo.p[k]) { EXPECT_TRUE(friedberg_member(x)) << x; }
    }
    std::uint64_t c = stable_min_index(x);
    if (c < h_ref(x)) { EXPECT_TRUE(friedberg_member(x)) << x; }
  }
  EXPECT_LT(since(t0), 120.0);
}

TEST(AntiEnumeration, TailListWitnesses) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<StagedSet> tails;
  for (int i = 0; i < 5; ++i) tails.push_back(StagedSet{tail_index_set(i)});
  AntiEnumeration AE(tails);
  // f_i(k) = i + k for the tail [i,∞], so f(k) = min(k,4) + k + 1
  auto f_ref = [](std::uint64_t k) { return std::min<std::uint64_t>(k, 4) + k + 1; };
  for (std::uint64_t k = 0; k < 6; ++k) EXPECT_EQ(AE.f(k, 1000000), f_ref(k));
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_TRUE(AE.contains_infinity(i, 100000));
    auto w = AE.witness(i, 1000000);
    ASSERT_TRUE(w.has_value()) << i;
    std::uint64_t x = std::stoull(w->get("x"));
    EXPECT_GE(x, i);
    EXPECT_GT(f_ref(stable_min_index(x)), x);
    EXPECT_TRUE(w->replay());
  }
  EXPECT_LT(since(t0), 60.0);
}

TEST(Dense, MembershipProgramMatchesBasicSets) {
  for (SpaceId sp : {SpaceId::NBar, SpaceId::Sierp}) {
    auto dm = dense_membership(sp);
    for (std::uint64_t j = 0; j < 12; ++j)
      for (std::uint64_t c = 0; c < 12; ++c) {
        bool want = sp == SpaceId::NBar ? nbar_filter_has(j, c) : c <= 1;
        EXPECT_EQ(eval(dm.program, pair(Natural(j), Natural(c)), 100000).value.is_zero(), want);
      }
  }
  EXPECT_THROW(dense_membership(SpaceId::Cantor), std::invalid_argument);
}

TEST(Dense, PointsLandInsideTheSetAndItsBasicSets) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<Natural> uni = {Programs::finite_set({0}), Programs::finite_set({49}), Programs::finite_set({2}),
                              Programs::finite_set({4})};
  std::vector<std::vector<std::uint64_t>> codes = {{0}, {49}, {2}, {4}};
  DenseSequence D(StagedSet{curated_friedberg().index_set}, SpaceId::NBar, uni);
  auto em = D.emit(1000000);
  std::set<std::uint64_t> got;
  for (const DenseEmission& d : em) {
    ASSERT_TRUE(d.point.n.has_value());
    std::uint64_t x = *d.point.n;
    got.insert(x);
    EXPECT_TRUE(friedberg_member(x)) << x;
    for (std::size_t u = 0; u < uni.size(); ++u) {
      if (d.a != uni[u]) continue;
      for (auto c : codes[u]) EXPECT_TRUE(nbar_filter_has(x, c)) << x << " " << c;
    }
  }
  // {2} misses the set, every other basic set meets it
  EXPECT_EQ(got, (std::set<std::uint64_t>{0, 1, 24}));
  EXPECT_TRUE(D.nonempty(1000000).has_value());
  EXPECT_LT(since(t0), 60.0);
}

TEST(Dense, EmptySetStaysSilent) {
  DenseSequence D(StagedSet{loop()}, SpaceId::Sierp, {Programs::get().sierp_top});
  EXPECT_FALSE(D.nonempty(100000).has_value());
  EXPECT_TRUE(D.emit(100000).empty());
}

TEST(Sigma2, SingletonOfTheNamedPoint) {
  const std::uint64_t k = 10;
  Natural i = Programs::nbar_name(2);
  Sigma2Builder S({StagedSet{Natural(0)}}, {StagedSet{Natural(0)}}, i, k);
  for (std::uint64_t x : {0, 1, 2, 3, 7}) EXPECT_EQ(S.in_C(Point::nbar(x), 100000), x == 2) << x;
  EXPECT_FALSE(S.in_C(Point::nbar(std::nullopt), 100000));
  auto ps = S.pairs(100000);
  ASSERT_EQ(ps.size(), 2 * k);
  for (std::uint64_t n = 0; n < k; ++n) {
    EXPECT_EQ(ps[2 * n].upgraded, nbar_filter_has(2, n)) << n;
    EXPECT_TRUE(ps[2 * n + 1].upgraded);
  }
}

TEST(Sigma2, FailedLevelEmptiesTheSet) {
  Sigma2Builder S({StagedSet{Natural(0)}, StagedSet{loop()}}, {StagedSet{Natural(0)}}, Programs::nbar_name(2), 4);
  for (std::uint64_t x : {0, 1, 2, 3}) EXPECT_FALSE(S.in_C(Point::nbar(x), 100000));
}
