#include <gtest/gtest.h>

#include <chrono>

#include "cwb/adversaries.hpp"
#include "reference.hpp"

using namespace cwb;

namespace {

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::uint64_t ref_steps(const Natural& i) {
  auto r = ref::run(decode(i), i.to_mpz(), 10000000);
  EXPECT_TRUE(r.halted);
  return r.steps;
}

std::optional<std::uint64_t> ref_bit(const Natural& prog, std::uint64_t pos) {
  auto r = ref::run(decode(prog), pos, 10000000);
  if (!r.halted) return std::nullopt;
  return r.value.get_ui();
}

}  // namespace

TEST(ConverterAdversary, UniverseTimesAndPatterns) {
  auto U = converter_universe();
  for (std::size_t j = 0; j < U.halting.size(); ++j) {
    std::uint64_t t = ref_steps(U.halting[j]);
    EXPECT_EQ(U.times[j], t);
    Natural x = halting_pattern(U.halting[j]);
    EXPECT_EQ(ref_bit(x, t), 1u);
    if (t > 0) { EXPECT_EQ(ref_bit(x, t - 1), 0u); }
  }
  for (std::size_t j = 1; j < U.times.size(); ++j) EXPECT_LT(U.times[j - 1], U.times[j]);
  EXPECT_EQ(ref_bit(halting_pattern(U.diverging), 500), 0u);
}

TEST(ConverterAdversary, ConstantZeroIsRefutedAtTheHaltingTime) {
  auto t0 = std::chrono::steady_clock::now();
  auto out = converter_adversary(constant_zero_converter(), 4096, 100000);
  ASSERT_TRUE(std::holds_alternative<RefutationWitness>(out));
  const auto& w = std::get<RefutationWitness>(out);
  EXPECT_EQ(w.get("kind"), "wrong-bit");
  EXPECT_EQ(w.get("input"), "halting");
  EXPECT_EQ(w.get("use"), "0");
  auto U = converter_universe();
  std::uint64_t t = std::stoull(w.get("t"));
  // the first curated halting time beyond a use of 0
  std::uint64_t want_t = 0;
  for (auto s : U.times)
    if (s > 0) {
      want_t = s;
      break;
    }
  EXPECT_EQ(t, want_t);
  EXPECT_EQ(w.get("expected"), "1");
  EXPECT_EQ(w.get("computed"), "0");
  EXPECT_TRUE(w.replay());
  EXPECT_TRUE(w.replay());
  EXPECT_LT(since(t0), 120.0);
}

TEST(ConverterAdversary, FirstConsistentShortProgramIsRefuted) {
  auto t0 = std::chrono::steady_clock::now();
  auto out = converter_adversary(first_consistent_converter(), 4096, 100000);
  ASSERT_TRUE(std::holds_alternative<RefutationWitness>(out));
  const auto& w = std::get<RefutationWitness>(out);
  EXPECT_GT(std::stoull(w.get("t")), std::stoull(w.get("use")));
  EXPECT_EQ(w.get("index_on_diverging"), w.get("index_on_halting"));
  if (w.get("kind") == "wrong-bit") {
    // recheck the disagreement with the GMP interpreter
    std::uint64_t t = std::stoull(w.get("t"));
    Natural idx = Natural(std::stoull(w.get("index_on_halting")));
    EXPECT_NE(ref_bit(idx, t), std::optional<std::uint64_t>(std::stoull(w.get("expected"))));
  }
  EXPECT_TRUE(w.replay());
  EXPECT_LT(since(t0), 120.0);
}

TEST(ConverterAdversary, OverrunningCandidateGetsABudgetReport) {
  auto out = converter_adversary(greedy_converter(), 256, 10000);
  ASSERT_TRUE(std::holds_alternative<BudgetReport>(out));
  EXPECT_GT(std::get<BudgetReport>(out).spent, 256u);
}

TEST(LearnerAdversary, SeenSoFarLearnerTakesFiveValues) {
  auto t0 = std::chrono::steady_clock::now();
  auto out = learner_adversary(seen_so_far_learner(), 5, 100000);
  ASSERT_TRUE(std::holds_alternative<RefutationWitness>(out));
  const auto& w = std::get<RefutationWitness>(out);
  EXPECT_GE(std::stoull(w.get("distinct_guesses")), 5u);
  EXPECT_EQ(w.get("stages"), "{0} {0,1} {0,1,2} {0,1,2,3} {0,1,2,3,4}");
  EXPECT_TRUE(w.replay());
  EXPECT_LT(since(t0), 120.0);
}

TEST(LearnerAdversary, ConstantGuesserIsCaughtOnAnExtraElement) {
  // code 0 halts everywhere, so it enumerates 1 although the set is {0}
  ASSERT_TRUE(ref::run(decode(Natural(0)), 1, 100).halted);
  auto out = learner_adversary(constant_learner(Natural(0)), 5, 100000);
  ASSERT_TRUE(std::holds_alternative<RefutationWitness>(out));
  const auto& w = std::get<RefutationWitness>(out);
  EXPECT_EQ(w.get("set"), "{0}");
  EXPECT_EQ(w.get("element"), "1");
  EXPECT_EQ(w.get("error"), "enumerates an element outside the set");
  EXPECT_TRUE(w.replay());
}

TEST(LearnerAdversary, ConstantGuesserOfTheEmptySetMissesAnElement) {
  Natural loop = encode(dsl::mu(dsl::succ()));
  auto out = learner_adversary(constant_learner(loop), 5, 100000);
  ASSERT_TRUE(std::holds_alternative<RefutationWitness>(out));
  const auto& w = std::get<RefutationWitness>(out);
  EXPECT_EQ(w.get("element"), "0");
  EXPECT_EQ(w.get("error"), "misses an element within fuel");
}
