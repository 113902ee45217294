#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rccs/prob_space.hpp"

namespace rccs {

/// Outcome of checking the five conjunctive-fork conditions for <A, B, C>.
///
/// conditions[0]  0 < p(C) < 1
/// conditions[1]  p(A∧B|C)  = p(A|C)p(B|C)
/// conditions[2]  p(A∧B|C̄) = p(A|C̄)p(B|C̄)
/// conditions[3]  p(A|C) > p(A|C̄)
/// conditions[4]  p(B|C) > p(B|C̄)
struct ForkReport {
  std::array<bool, 5> conditions{};
  Rational screening_cause;       // p(A∧B|C) − p(A|C)p(B|C)
  Rational screening_complement;  // same, given C̄
  Rational difference_a;          // p(A|C) − p(A|C̄)
  Rational difference_b;          // p(B|C) − p(B|C̄)
  bool verdict = false;

  static constexpr std::array<const char*, 5> kConditionIds{
      "cause_nontrivial", "screens_cause", "screens_complement", "raises_a", "raises_b"};
};

inline ForkReport verify_fork(const ProbSpace& space, const Event& A, const Event& B,
                              const Event& C) {
  const Rational pc = probability(space, C);
  if (is_zero(pc) || pc == 1)
    throw Error(ErrorCode::ZeroMeasureCondition,
                "the cause must have probability strictly between 0 and 1, got " + to_string(pc));
  const Event notC = ~C;
  const Event AB = A & B;

  ForkReport r;
  const Rational aC = conditional(space, A, C), aN = conditional(space, A, notC);
  const Rational bC = conditional(space, B, C), bN = conditional(space, B, notC);
  r.screening_cause = conditional(space, AB, C) - aC * bC;
  r.screening_complement = conditional(space, AB, notC) - aN * bN;
  r.difference_a = aC - aN;
  r.difference_b = bC - bN;
  r.conditions = {true, is_zero(r.screening_cause), is_zero(r.screening_complement),
                  is_positive(r.difference_a), is_positive(r.difference_b)};
  r.verdict = true;
  for (bool c : r.conditions) r.verdict = r.verdict && c;
  return r;
}

/// Per-cell and per-pair evidence for the common-cause-system conditions.
///
/// `definition_verdict` is the conjunction of the three printed conditions:
/// positive cells, screening off in every cell, and pairwise co-monotone
/// conditionals. `verdict` additionally requires every cell to leave A and B
/// undetermined (0 < p(A|C_i), p(B|C_i) < 1). Without that, a partition such
/// as {A, Ā} qualifies trivially and the correspondence with admissible*
/// number sets breaks at the boundary.
struct RccsReport {
  std::size_t n = 0;
  std::vector<bool> positivity;
  /// p(A∧B|C_i) − p(A|C_i)p(B|C_i); empty when C_i is null.
  std::vector<std::optional<Rational>> screening_residuals;
  /// [p(A|C_i)−p(A|C_j)][p(B|C_i)−p(B|C_j)] for i < j, row-major; empty when
  /// either cell is null.
  std::vector<std::optional<Rational>> ordering_products;
  std::vector<bool> interior;
  bool definition_verdict = false;
  bool verdict = false;

  /// Index of the ordering product for the pair (i, j), i < j.
  std::size_t pair_index(std::size_t i, std::size_t j) const {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  }
};

inline RccsReport verify_rccs(const ProbSpace& space, const Event& A, const Event& B,
                              const Partition& partition) {
  const std::size_t n = partition.size();
  if (n < 2) throw Error(ErrorCode::SizeTooSmall, "a common cause system needs at least 2 cells");
  detail::require_member(space, A);
  detail::require_member(space, B);
  const Event AB = A & B;

  RccsReport r;
  r.n = n;
  r.positivity.resize(n);
  r.interior.resize(n);
  r.screening_residuals.resize(n);
  std::vector<std::optional<Rational>> pa(n), pb(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Event& cell = partition[i];
    r.positivity[i] = is_positive(probability(space, cell));
    if (!r.positivity[i]) continue;
    pa[i] = conditional(space, A, cell);
    pb[i] = conditional(space, B, cell);
    r.screening_residuals[i] = conditional(space, AB, cell) - *pa[i] * *pb[i];
    r.interior[i] = in_open_unit(*pa[i]) && in_open_unit(*pb[i]);
  }
  r.ordering_products.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (pa[i] && pa[j])
        r.ordering_products.emplace_back((*pa[i] - *pa[j]) * (*pb[i] - *pb[j]));
      else
        r.ordering_products.emplace_back(std::nullopt);
    }

  bool ok = true;
  for (std::size_t i = 0; i < n; ++i)
    ok = ok && r.positivity[i] && is_zero(*r.screening_residuals[i]);
  for (const auto& p : r.ordering_products) ok = ok && p && is_positive(*p);
  r.definition_verdict = ok;
  bool inner = true;
  for (bool b : r.interior) inner = inner && b;
  r.verdict = ok && inner;
  return r;
}

/// Covariance of X and Y split along a partition {Z_i}:
///   cov = ½ Σ_{i,j} p(Z_i)p(Z_j)[p(X|Z_i)−p(X|Z_j)][p(Y|Z_i)−p(Y|Z_j)]
///       + Σ_i p(Z_i)[p(X∧Y|Z_i) − p(X|Z_i)p(Y|Z_i)]
/// The defect term carries coefficient 1: with the single-cell partition the
/// comonotone term vanishes and the defect term alone equals the covariance.
struct CorrelationDecomposition {
  Rational pair_covariance;
  Rational comonotone_sum;
  Rational defect_sum;

  Rational residual() const { return pair_covariance - comonotone_sum - defect_sum; }
};

inline CorrelationDecomposition correlation_decomposition(const ProbSpace& space, const Event& X,
                                                          const Event& Y,
                                                          const Partition& partition) {
  const std::size_t n = partition.size();
  std::vector<Rational> pz(n), px(n), py(n);
  const Event XY = X & Y;
  CorrelationDecomposition d;
  for (std::size_t i = 0; i < n; ++i) {
    pz[i] = probability(space, partition[i]);
    px[i] = conditional(space, X, partition[i]);
    py[i] = conditional(space, Y, partition[i]);
    d.defect_sum += pz[i] * (conditional(space, XY, partition[i]) - px[i] * py[i]);
  }
  // Ordered pairs i != j each appear twice in the full double sum; the
  // halving cancels that, so summing i < j once is the same quantity.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      d.comonotone_sum += pz[i] * pz[j] * (px[i] - px[j]) * (py[i] - py[j]);
  d.pair_covariance = probability(space, XY) - probability(space, X) * probability(space, Y);
  return d;
}

}  // namespace rccs
