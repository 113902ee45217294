#include <gtest/gtest.h>

#include "test_support.hpp"

namespace rccs {
namespace {

using testing::q;

TEST(RationalTest, ParsesLowestTerms) {
  EXPECT_EQ(parse_rational("6/8"), q(3, 4));
  EXPECT_EQ(to_string(parse_rational("6/8")), "3/4");
  EXPECT_EQ(parse_rational("-1/2"), q(-1, 2));
  EXPECT_EQ(parse_rational("2"), q(2));
  EXPECT_EQ(to_string(parse_rational("4/2")), "2");
}

TEST(RationalTest, RejectsMalformed) {
  for (const char* bad : {"3/0", "", "/2", "1/", "1/-2", " 1/2", "1.5", "a/b", "1//2", "0x1/2"}) {
    try {
      parse_rational(bad);
      FAIL() << "accepted \"" << bad << "\"";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError) << bad;
    }
  }
}

TEST(ProbSpaceTest, RejectsBadConstruction) {
  auto code_of = [](std::vector<Atom> atoms) {
    try {
      ProbSpace s(std::move(atoms));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;  // sentinel: construction succeeded
  };
  EXPECT_EQ(code_of({}), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of({{"w", q(1, 2)}}), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of({{"w", q(1, 2)}, {"w", q(1, 2)}}), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of({{"u", q(3, 2)}, {"v", q(-1, 2)}}), ErrorCode::InvalidArgument);
}

TEST(ProbSpaceTest, ZeroWeightAtomsAreAllowed) {
  ProbSpace s({{"u", q(1)}, {"v", q(0)}});
  EXPECT_EQ(probability(s, s.event({"v"})), 0);
}

TEST(ProbabilityTest, Examples) {
  testing::S4 s4;
  EXPECT_EQ(probability(s4.space, s4.space.whole()), 1);
  EXPECT_EQ(probability(s4.space, s4.space.empty_event()), 0);
  EXPECT_EQ(probability(s4.space, s4.space.event({"w1", "w2"})), q(1, 2));
}

TEST(ProbabilityTest, ForeignEventIsRejected) {
  testing::S4 s4, other;
  try {
    probability(s4.space, other.A);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ForeignEvent);
  }
  EXPECT_THROW((void)(s4.A & other.B), Error);
}

TEST(ConditionalTest, Examples) {
  testing::S4 s4;
  const Event C = s4.space.event({"w1", "w3"});
  EXPECT_EQ(conditional(s4.space, s4.A, s4.space.whole()), probability(s4.space, s4.A));
  EXPECT_EQ(conditional(s4.space, s4.A, C), q(3, 4));
}

TEST(ConditionalTest, ZeroMeasureConditionIsAnError) {
  ProbSpace s({{"u", q(1)}, {"v", q(0)}});
  try {
    conditional(s, s.whole(), s.event({"v"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroMeasureCondition);
  }
}

TEST(CorrelationSummaryTest, S4) {
  testing::S4 s4;
  const auto s = correlation_summary(s4.space, s4.A, s4.B);
  EXPECT_EQ(s.a, q(1, 2));
  EXPECT_EQ(s.b, q(1, 2));
  EXPECT_EQ(s.pAB, q(3, 8));
  EXPECT_EQ(s.gamma, q(1, 8));
  EXPECT_EQ(s.quadrants[0] + s.quadrants[1] + s.quadrants[2] + s.quadrants[3], 1);
  EXPECT_TRUE(s.positive());
  EXPECT_FALSE(s.strict());
}

TEST(CorrelationSummaryTest, IndependentPairHasZeroGamma) {
  // Product weights p(A)=1/3, p(B)=1/4.
  ProbSpace s({{"ab", q(1, 12)}, {"aB", q(3, 12)}, {"Ab", q(2, 12)}, {"AB", q(6, 12)}});
  const auto sum = correlation_summary(s, s.event({"ab", "aB"}), s.event({"ab", "Ab"}));
  EXPECT_EQ(sum.gamma, 0);
  EXPECT_FALSE(sum.positive());
}

TEST(CorrelationSummaryTest, SelfCorrelation) {
  testing::S4 s4;
  const auto s = correlation_summary(s4.space, s4.A, s4.A);
  EXPECT_EQ(s.gamma, q(1, 4));
  EXPECT_EQ(s.gamma, s.a * (1 - s.a));
  EXPECT_TRUE(s.strict());
}

TEST(CorrelationSummaryTest, FromMarginalsRejectsUnrealizable) {
  EXPECT_THROW(CorrelationSummary::from_marginals(q(1, 2), q(1, 2), q(3, 4)), Error);
  EXPECT_THROW(CorrelationSummary::from_marginals(q(3, 4), q(3, 4), q(1, 4)), Error);
}

TEST(ValidatePartitionTest, Examples) {
  testing::S4 s4;
  const auto& sp = s4.space;
  EXPECT_EQ(validate_partition(sp, {sp.whole()}).size(), 1u);
  EXPECT_EQ(validate_partition(sp, {sp.event({"w1"}), sp.event({"w2"}), sp.event({"w3"}), sp.event({"w4"})})
                .size(),
            4u);
  try {
    validate_partition(sp, {sp.event({"w1"}), sp.event({"w1", "w2"}), sp.event({"w3", "w4"})});
    FAIL();
  } catch (const NotAPartitionError& e) {
    EXPECT_EQ(e.defect(), PartitionDefect::Overlap);
  }
  try {
    validate_partition(sp, {sp.event({"w1"}), sp.event({"w3", "w4"})});
    FAIL();
  } catch (const NotAPartitionError& e) {
    EXPECT_EQ(e.defect(), PartitionDefect::Gap);
    EXPECT_EQ(e.code(), ErrorCode::NotAPartition);
  }
  EXPECT_THROW(validate_partition(sp, {}), NotAPartitionError);
}

// Exact laws over randomly drawn spaces and events.
TEST(ProbSpaceProperties, TotalProbabilityComplementAndProductRule) {
  std::mt19937_64 rng(20261019);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + trial % 8;
    const auto space = testing::random_space(rng, k);
    const auto x = testing::random_event(rng, space);
    const auto given = testing::random_event(rng, space);
    EXPECT_EQ(probability(space, x) + probability(space, ~x), 1);
    if (is_positive(probability(space, given))) {
      EXPECT_EQ(conditional(space, x, given) * probability(space, given), probability(space, x & given));
    }
    const auto part = testing::random_partition(rng, space, 1 + trial % k);
    Rational total;
    for (const auto& z : part) total += conditional(space, x, z) * probability(space, z);
    EXPECT_EQ(total, probability(space, x));
  }
}

TEST(EventTest, LatticeOperations) {
  testing::S4 s4;
  EXPECT_EQ((s4.A & s4.B).labels(), std::vector<std::string>{"w1"});
  EXPECT_EQ((s4.A | s4.B).labels(), (std::vector<std::string>{"w1", "w2", "w3"}));
  EXPECT_EQ((~s4.A).labels(), (std::vector<std::string>{"w3", "w4"}));
  EXPECT_TRUE(s4.A.disjoint_from(~s4.A));
}

}  // namespace
}  // namespace rccs
