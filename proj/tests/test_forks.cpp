#include <gtest/gtest.h>

#include <algorithm>

#include "test_support.hpp"

namespace rccs {
namespace {

using testing::q;

/// Product-form space: atom (c, x, y) weighs p(c)·p(A=x|c)·p(B=y|c), so A and
/// B are independent inside C and inside C̄ by construction.
struct ProductFork {
  ProbSpace space;
  Event A, B, C;
};

ProductFork product_fork(const Rational& pc, const Rational& aC, const Rational& aN,
                         const Rational& bC, const Rational& bN) {
  std::vector<Atom> atoms;
  const Rational pcs[2] = {pc, 1 - pc}, pa[2] = {aC, aN}, pb[2] = {bC, bN};
  const char* tag[2] = {"c", "n"};
  for (int c = 0; c < 2; ++c)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        const Rational wa = x ? pa[c] : Rational(1 - pa[c]);
        const Rational wb = y ? pb[c] : Rational(1 - pb[c]);
        atoms.push_back({std::string(tag[c]) + (x ? "A" : "a") + (y ? "B" : "b"), Rational(pcs[c] * wa * wb)});
      }
  ProbSpace s(std::move(atoms));
  return {s, s.event({"cAb", "cAB", "nAb", "nAB"}), s.event({"caB", "cAB", "naB", "nAB"}),
          s.event({"cab", "caB", "cAb", "cAB"})};
}

TEST(VerifyForkTest, ProductSpaceIsAFork) {
  auto f = product_fork(q(1, 2), q(3, 4), q(1, 4), q(3, 4), q(1, 4));
  const auto r = verify_fork(f.space, f.A, f.B, f.C);
  EXPECT_TRUE(r.verdict);
  for (bool c : r.conditions) EXPECT_TRUE(c);
  EXPECT_EQ(r.screening_cause, 0);
  EXPECT_EQ(r.screening_complement, 0);
  EXPECT_EQ(r.difference_a, q(1, 2));
  EXPECT_EQ(r.difference_b, q(1, 2));
  // p(A∧B) = ½·9/16 + ½·1/16 = 5/16; p(A)p(B) = 1/4.
  EXPECT_EQ(correlation_summary(f.space, f.A, f.B).gamma, q(1, 16));
}

TEST(VerifyForkTest, CertainCauseIsRejected) {
  auto f = product_fork(q(1, 2), q(3, 4), q(1, 4), q(3, 4), q(1, 4));
  for (const Event& cause : {f.space.whole(), f.space.empty_event()}) {
    try {
      verify_fork(f.space, f.A, f.B, cause);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ZeroMeasureCondition);
    }
  }
}

TEST(VerifyForkTest, CounterexampleCellDoesNotScreenOff) {
  const auto cx = realize_counterexample();
  const auto r = verify_fork(cx.space, cx.A, cx.B, cx.partition[0]);
  // 1/24 − (1/4)(1/3) inside C1; 1/16 − (1/8)(1/6) inside C2.
  EXPECT_EQ(r.screening_cause, q(-1, 24));
  EXPECT_EQ(r.screening_complement, q(1, 24));
  EXPECT_FALSE(r.conditions[1]);
  EXPECT_FALSE(r.conditions[2]);
  EXPECT_TRUE(r.conditions[3]);
  EXPECT_TRUE(r.conditions[4]);
  EXPECT_FALSE(r.verdict);
}

TEST(VerifyForkTest, FailingDifferenceIsReported) {
  auto f = product_fork(q(1, 3), q(1, 4), q(3, 4), q(3, 4), q(1, 4));
  const auto r = verify_fork(f.space, f.A, f.B, f.C);
  EXPECT_FALSE(r.conditions[3]);
  EXPECT_TRUE(r.conditions[4]);
  EXPECT_FALSE(r.verdict);
}

TEST(VerifyRccsTest, QuadrantCellsFailOrdering) {
  testing::S4 s4;
  const auto& sp = s4.space;
  const auto part = validate_partition(sp, {s4.A & s4.B, s4.A & ~s4.B, ~s4.A & s4.B, ~s4.A & ~s4.B});
  const auto r = verify_rccs(sp, s4.A, s4.B, part);
  for (const auto& res : r.screening_residuals) EXPECT_EQ(*res, 0);
  // (A∧B̄, Ā∧B): p(A|·) differs by +1, p(B|·) by −1.
  EXPECT_EQ(*r.ordering_products[r.pair_index(1, 2)], -1);
  // (A∧B, A∧B̄): p(A|·) equal.
  EXPECT_EQ(*r.ordering_products[r.pair_index(0, 1)], 0);
  EXPECT_FALSE(r.definition_verdict);
  EXPECT_FALSE(r.verdict);
}

TEST(VerifyRccsTest, ZeroWeightCellFailsPositivity) {
  ProbSpace sp({{"u", q(1, 2)}, {"v", q(1, 2)}, {"z", q(0)}});
  const auto part = validate_partition(sp, {sp.event({"u"}), sp.event({"v"}), sp.event({"z"})});
  const auto r = verify_rccs(sp, sp.event({"u"}), sp.event({"u"}), part);
  EXPECT_FALSE(r.positivity[2]);
  EXPECT_FALSE(r.screening_residuals[2].has_value());
  EXPECT_FALSE(r.ordering_products[r.pair_index(0, 2)].has_value());
  EXPECT_FALSE(r.verdict);
}

TEST(VerifyRccsTest, SingleCellIsTooSmall) {
  testing::S4 s4;
  try {
    verify_rccs(s4.space, s4.A, s4.B, validate_partition(s4.space, {s4.space.whole()}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SizeTooSmall);
  }
}

// {A, Ā} satisfies positivity, screening and ordering literally (each cell
// pins A down), but leaves the interior; only the strict verdict rejects it.
TEST(VerifyRccsTest, BoundaryPartitionPassesOnlyTheLiteralConditions) {
  testing::S4 s4;
  const auto r = verify_rccs(s4.space, s4.A, s4.B, validate_partition(s4.space, {s4.A, ~s4.A}));
  EXPECT_TRUE(r.definition_verdict);
  EXPECT_FALSE(r.interior[0]);
  EXPECT_FALSE(r.verdict);
}

TEST(VerifyRccsTest, RealizedProfileIsASystem) {
  // Cells with d_i = a_i b_i and co-monotone conditionals.
  const auto sys = realize_profile({{q(1, 2), q(1, 8), q(1, 6), q(1, 48)}, {q(1, 2), q(7, 8), q(5, 6), q(35, 48)}});
  const auto r = verify_rccs(sys.space, sys.A, sys.B, sys.partition);
  EXPECT_TRUE(r.verdict);
  EXPECT_EQ(*r.ordering_products[0], q(3, 4) * q(2, 3));
}

TEST(VerifyRccsProperties, VerdictInvariantUnderCellPermutation) {
  std::mt19937_64 rng(7);
  int systems = 0;
  for (int trial = 0; trial < 200; ++trial) {
    // Mix realized systems (verdict true) with random partitions.
    ProbSpace space = testing::random_space(rng, 6);
    Event A = testing::random_event(rng, space), B = testing::random_event(rng, space);
    std::optional<Partition> part;
    if (trial % 2 == 0) {
      const long n = 2 + trial % 3;
      std::vector<CellProfile> cells;
      for (long i = 1; i <= n; ++i) {
        const Rational a = q(i, n + 1), b = q(i, n + 2);
        cells.push_back({q(1, n), a, b, Rational(a * b)});
      }
      auto sys = realize_profile(cells);
      space = sys.space;
      A = sys.A;
      B = sys.B;
      part = sys.partition;
    } else {
      part = testing::random_partition(rng, space, 2 + trial % 3);
    }
    const auto base = verify_rccs(space, A, B, *part);
    systems += base.verdict;
    std::vector<Event> cells(part->begin(), part->end());
    for (int shuffle = 0; shuffle < 3; ++shuffle) {
      std::shuffle(cells.begin(), cells.end(), rng);
      const auto r = verify_rccs(space, A, B, validate_partition(space, cells));
      EXPECT_EQ(r.verdict, base.verdict);
      EXPECT_EQ(r.definition_verdict, base.definition_verdict);
    }
    if (base.definition_verdict) {
      EXPECT_TRUE(correlation_summary(space, A, B).positive());
    }
  }
  EXPECT_GT(systems, 0);
}

TEST(CorrelationDecompositionTest, SingleCellPutsEverythingInTheDefect) {
  testing::S4 s4;
  const auto d = correlation_decomposition(s4.space, s4.A, s4.B, validate_partition(s4.space, {s4.space.whole()}));
  EXPECT_EQ(d.comonotone_sum, 0);
  EXPECT_EQ(d.defect_sum, d.pair_covariance);
  EXPECT_EQ(d.pair_covariance, q(1, 8));
  // The halved defect term would leave 1/16 unaccounted for.
  EXPECT_NE(d.pair_covariance, d.comonotone_sum + d.defect_sum / 2);
}

TEST(CorrelationDecompositionTest, ScreeningPartitionHasNoDefect) {
  const auto sys = realize_profile({{q(1, 2), q(1, 8), q(1, 6), q(1, 48)}, {q(1, 2), q(7, 8), q(5, 6), q(35, 48)}});
  const auto d = correlation_decomposition(sys.space, sys.A, sys.B, sys.partition);
  EXPECT_EQ(d.defect_sum, 0);
  EXPECT_EQ(d.pair_covariance, d.comonotone_sum);
  EXPECT_EQ(d.pair_covariance, q(1, 8));
}

TEST(CorrelationDecompositionTest, CounterexampleCancels) {
  const auto cx = realize_counterexample();
  const auto d = correlation_decomposition(cx.space, cx.A, cx.B, cx.partition);
  EXPECT_EQ(d.defect_sum, 0);
  EXPECT_EQ(d.pair_covariance, d.comonotone_sum);
  // ¼·(1/8)(1/6) = 1/192 and 5/96 − (3/16)(1/4) = 1/192.
  EXPECT_EQ(d.pair_covariance, q(1, 192));
}

TEST(CorrelationDecompositionTest, NullCellIsAnError) {
  ProbSpace sp({{"u", q(1, 2)}, {"v", q(1, 2)}, {"z", q(0)}});
  const auto part = validate_partition(sp, {sp.event({"u", "v"}), sp.event({"z"})});
  EXPECT_THROW(correlation_decomposition(sp, sp.event({"u"}), sp.event({"v"}), part), Error);
}

TEST(CorrelationDecompositionProperties, IdentityHoldsExactly) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto space = testing::random_space(rng, 1 + trial % 8);
    const auto X = testing::random_event(rng, space), Y = testing::random_event(rng, space);
    const auto part = testing::random_partition(rng, space, 1 + trial % space.size());
    EXPECT_EQ(correlation_decomposition(space, X, Y, part).residual(), 0);
  }
}

}  // namespace
}  // namespace rccs
