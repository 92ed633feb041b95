#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cwb/eval.hpp"
#include "cwb/godel.hpp"
#include "reference.hpp"

using namespace cwb;

namespace {

const char* kCurated[] = {
    "zero",
    "succ",
    "(comp succ succ)",
    "(pair snd fst)",
    "(comp pred fst)",
    "(if0 id (lit 7) (comp succ id))",
    "(mu (comp pred snd))",
    "(mu succ)",
    "(mu (if0 snd succ zero))",
    "(comp (pair (lit 3) id) succ)",
    "(if0 (comp pred id) zero (mu succ))",
    "(comp fst (pair id id))",
};

Natural big(const char* s) { return Natural::from_string(s); }

}  // namespace

TEST(Pairing, ExamplesFromTheFormula) {
  EXPECT_EQ(pair(0, 0), Natural(0));
  EXPECT_EQ(pair(1, 2), Natural(8));
  auto [x, y] = unpair(8);
  EXPECT_EQ(x, Natural(1));
  EXPECT_EQ(y, Natural(2));
}

TEST(Pairing, InverseOfDiagonalWalkBelowTenThousand) {
  for (std::uint64_t n = 0; n < 10000; ++n) {
    auto [x, y] = unpair(n);
    auto [rx, ry] = ref::unpair(n);
    ASSERT_EQ(x.to_mpz(), rx) << n;
    ASSERT_EQ(y.to_mpz(), ry) << n;
    ASSERT_EQ(pair(x, y), Natural(n));
  }
}

TEST(Pairing, LargeValuesAgreeWithPlainArithmetic) {
  Natural a = big("123456789012345678901234567890");
  Natural b = big("98765432109876543210");
  Natural p = pair(a, b);
  EXPECT_EQ(p.to_mpz(), ref::pair(a.to_mpz(), b.to_mpz()));
  Natural concrete(p.to_mpz());
  EXPECT_EQ(concrete, p);
  auto [x, y] = unpair(concrete);
  EXPECT_EQ(x, a);
  EXPECT_EQ(y, b);
  EXPECT_EQ(fst(p), a);
  EXPECT_LT(a, p);
  EXPECT_EQ(p.hash(), concrete.hash());
}

TEST(Pairing, BoundaryOfInlineRange) {
  Natural m = UINT64_MAX;
  EXPECT_TRUE(m.is_small());
  Natural n = m.succ();
  EXPECT_FALSE(n.is_small());
  EXPECT_EQ(n.pred(), m);
  EXPECT_EQ(pair(m, 0).to_mpz(), ref::pair(m.to_mpz(), 0));
  auto [x, y] = unpair(Natural(UINT64_MAX));
  EXPECT_EQ(pair(x, y), Natural(UINT64_MAX));
}

TEST(Encoding, ZeroHasCodeZero) { EXPECT_EQ(encode(Term::zero()), Natural(0)); }

TEST(Encoding, RawColumnsForCodeBuilders) {
  Term s = Term::succ(), i = Term::id();
  EXPECT_EQ(encode(Term::comp(s, i)), pair(8, pair(encode(s), encode(i))));
  EXPECT_EQ(decode(encode(Term::comp(s, i))), Term::comp(s, i));
}

TEST(Encoding, MatchesReferenceNumberingOnRandomTerms) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    Term t = ref::random_term(rng, 5, true);
    Natural c = encode(t);
    ASSERT_EQ(c.to_mpz(), ref::code_of(t)) << print(t);
    ASSERT_EQ(decode(c), t) << print(t);
    // decoding a fresh concrete copy must not rely on memoized terms
    ASSERT_EQ(decode(Natural(c.to_mpz())), t) << print(t);
  }
}

TEST(Encoding, BijectiveOnSmallNaturals) {
  for (std::uint64_t n = 0; n < 10000; ++n) ASSERT_EQ(encode(decode(n)), Natural(n)) << n;
}

TEST(Encoding, DecodeIsTotal) {
  Term t = decode(1000000000ULL);
  EXPECT_EQ(encode(t), Natural(1000000000ULL));
  Natural huge = big("31415926535897932384626433832795028841971693993751058209749445923");
  EXPECT_EQ(encode(decode(huge)), huge);
}

TEST(Syntax, PrintParseRoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    Term t = ref::random_term(rng, 5, true);
    std::string s = print(t);
    ASSERT_EQ(parse(s), t);
    ASSERT_EQ(print(parse(s)), s);
  }
  for (const char* s : kCurated) EXPECT_EQ(print(parse(s)), s);
}

TEST(Syntax, ErrorsCarryPositions) {
  try {
    parse("(comp succ bogus)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position, 11u);
  }
  EXPECT_THROW(parse("(pair succ"), ParseError);
  EXPECT_THROW(parse("succ succ"), ParseError);
  EXPECT_THROW(parse("(lit x)"), ParseError);
  EXPECT_EQ(parse("  (lit  12 ) "), Term::lit(12));
}

TEST(Eval, SuccExample) {
  EvalResult r = eval(encode(Term::succ()), 5, 10);
  ASSERT_TRUE(r.halted);
  EXPECT_EQ(r.value, Natural(6));
  EXPECT_LE(r.steps, 10u);
}

TEST(Eval, UnsatisfiableSearchRunsOutOfFuel) {
  EXPECT_FALSE(eval(encode(Term::mu(Term::succ())), 0, 100).halted);
}

TEST(Eval, AgreesWithReferenceInterpreter) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    Term t = ref::random_term(rng, 4);
    std::uint64_t x = rng() % 40;
    auto expect = ref::run(t, x, 500);
    EvalResult got = eval(t, x, 500);
    ASSERT_EQ(got.halted, expect.halted) << print(t) << " on " << x;
    if (got.halted) {
      ASSERT_EQ(got.value.to_mpz(), expect.value) << print(t);
      ASSERT_EQ(got.steps, expect.steps) << print(t);
    }
  }
}

TEST(Eval, FuelMonotone) {
  for (const char* s : kCurated) {
    Term t = parse(s);
    for (std::uint64_t n = 0; n < 12; ++n) {
      EvalResult prev;
      for (std::uint64_t f = 0; f < 120; ++f) {
        EvalResult r = eval(t, n, f);
        if (prev.halted) {
          ASSERT_EQ(r, prev) << s << " n=" << n << " f=" << f;
        }
        if (r.halted) {
          ASSERT_LE(r.steps, f);
        }
        prev = r;
      }
    }
  }
}

TEST(Eval, ClockReportsBoundedRuns) {
  Natural succ = encode(Term::succ());
  Natural loop = encode(Term::mu(Term::succ()));
  EvalResult r = eval(Term::clock(), pair(succ, pair(4, 10)), 100);
  ASSERT_TRUE(r.halted);
  EXPECT_EQ(r.value, Natural(6));  // 1 + succ(4)
  EXPECT_EQ(r.steps, 2u);
  r = eval(Term::clock(), pair(loop, pair(0, 10)), 100);
  ASSERT_TRUE(r.halted);
  EXPECT_EQ(r.value, Natural(0));
  EXPECT_EQ(r.steps, 11u);
  EXPECT_FALSE(eval(Term::clock(), pair(loop, pair(0, 10)), 8).halted);
}

TEST(Smn, ShapeAndEquation) {
  std::mt19937_64 rng(19);
  std::vector<Natural> progs;
  for (const char* s : kCurated) progs.push_back(encode(parse(s)));
  for (int i = 0; i < 50; ++i) {
    Natural e = progs[rng() % progs.size()];
    std::uint64_t x = rng() % 30, y = rng() % 30;
    Natural s = smn(e, x);
    EXPECT_GT(s, Natural(0));
    EXPECT_EQ(decode(s).op(), Op::Comp);
    auto lhs = ref::run(decode(s), y, 100000);
    auto rhs = ref::run(decode(e), ref::pair(x, y), 100000);
    ASSERT_EQ(lhs.halted, rhs.halted);
    if (lhs.halted) {
      ASSERT_EQ(lhs.value, rhs.value);
      ASSERT_EQ(lhs.steps, rhs.steps + kSmnOverhead);
    }
  }
}

TEST(Smn, FixedFirstArgumentZero) {
  Natural e = encode(parse("(if0 fst snd (comp succ snd))"));
  for (std::uint64_t y = 0; y <= 20; ++y) {
    EvalResult a = eval(smn(e, 0), y, 1000);
    EvalResult b = eval(e, pair(0, y), 1000);
    ASSERT_TRUE(a.halted && b.halted);
    EXPECT_EQ(a.value, b.value);
  }
}

TEST(Universal, AppliesIndexToArgument) {
  Natural u = universal_index();
  EXPECT_EQ(decode(u), Term::univ());
  EvalResult r = eval(u, pair(encode(Term::succ()), 7), 1000);
  ASSERT_TRUE(r.halted);
  EXPECT_EQ(r.value, Natural(8));
}

TEST(Universal, OverheadOnCuratedPairs) {
  Natural u = universal_index();
  int cases = 0;
  for (const char* s : kCurated) {
    Natural e = encode(parse(s));
    for (std::uint64_t n = 0; n < 5; ++n, ++cases) {
      auto direct = ref::run(parse(s), n, 5000);
      EvalResult via = eval(u, pair(e, n), 5000 + kUnivOverhead);
      ASSERT_EQ(via.halted, direct.halted) << s;
      if (via.halted) {
        EXPECT_EQ(via.value.to_mpz(), direct.value);
        EXPECT_EQ(via.steps, direct.steps + kUnivOverhead);
      }
    }
  }
  EXPECT_GE(cases, 50);
}

TEST(Pad, StrictGrowthSameFunction) {
  EXPECT_GT(pad(encode(Term::zero())), Natural(0));
  for (const char* s : kCurated) {
    Natural e = encode(parse(s));
    std::set<std::string> seen{e.str()};
    Natural p = e;
    for (int k = 0; k < 5; ++k) {
      Natural q = pad(p);
      ASSERT_GT(q, p);
      seen.insert(q.str());
      p = q;
    }
    EXPECT_EQ(seen.size(), 6u);
    for (std::uint64_t n = 0; n <= 20; ++n) {
      EvalResult a = eval(e, n, 2000), b = eval(p, n, 2000 + 5 * kPadOverhead);
      ASSERT_EQ(a.halted, b.halted);
      if (a.halted) {
        EXPECT_EQ(a.value, b.value);
      }
    }
  }
}

TEST(Pairing, ApproximateBitLengthMatchesExactValue) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Term t = ref::random_term(rng, 5);
    Natural c = encode(t);
    mpz_class v = ref::code_of(t);
    EXPECT_EQ(c.bit_length(), mpz_sizeinbase(v.get_mpz_t(), 2)) << print(t);
    EXPECT_NEAR(static_cast<double>(c.log2_approx()), mpz_sizeinbase(v.get_mpz_t(), 2) - 0.5, 0.51);
  }
}
