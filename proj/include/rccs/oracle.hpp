#pragma once

// Brute-force cross-check. Nothing here calls the conditional-probability
// code in prob_space.hpp or forks.hpp: atom weights are rescaled to integers
// over a common denominator and every condition is decided by integer
// cross-multiplication.

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rccs/prob_space.hpp"

namespace rccs::oracle {

struct SearchBudget {
  std::size_t max_atoms = 12;
  std::size_t max_partition_size = 8;
  std::size_t max_partitions = 5'000'000;
};

/// Stirling number of the second kind S(k, n).
inline mpz_class stirling2(std::size_t k, std::size_t n) {
  // row[j] holds S(i, j) for the current i.
  std::vector<mpz_class> row(n + 1, 0);
  row[0] = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    for (std::size_t j = n; j >= 1; --j) row[j] = row[j] * static_cast<unsigned long>(j) + row[j - 1];
    row[0] = 0;
  }
  return row[n];
}

/// Visits every set partition of {0..k−1} into exactly n non-empty blocks as
/// a restricted-growth string (rgs[0] = 0, rgs[j] <= 1 + max(rgs[0..j−1])),
/// in lexicographic order. `visit` may return false to stop early.
template <typename Visit>
void for_each_set_partition(std::size_t k, std::size_t n, Visit&& visit) {
  if (n == 0 || n > k) return;
  std::vector<std::size_t> rgs(k, 0);
  bool stop = false;
  auto rec = [&](auto&& self, std::size_t pos, std::size_t blocks) -> void {
    if (stop) return;
    if (pos == k) {
      if (blocks == n && !visit(std::span<const std::size_t>(rgs))) stop = true;
      return;
    }
    // Remaining positions must still be able to open the missing blocks.
    const std::size_t remaining = k - pos;
    const std::size_t top = std::min(blocks, n - 1);
    for (std::size_t v = 0; v <= top && !stop; ++v) {
      const std::size_t next_blocks = v == blocks ? blocks + 1 : blocks;
      if (next_blocks + (remaining - 1) < n) continue;
      rgs[pos] = v;
      self(self, pos + 1, next_blocks);
    }
  };
  rgs[0] = 0;
  rec(rec, 1, 1);
}

/// Integer image of a space: weight_j = p(atom_j)·L with L the lcm of all
/// denominators.
struct IntegerWeights {
  std::vector<mpz_class> w;
  mpz_class scale;
};

inline IntegerWeights integer_weights(const ProbSpace& space) {
  IntegerWeights out;
  out.scale = 1;
  for (const auto& atom : space.atoms()) {
    mpz_class den = atom.weight.get_den();
    mpz_lcm(out.scale.get_mpz_t(), out.scale.get_mpz_t(), den.get_mpz_t());
  }
  for (const auto& atom : space.atoms())
    out.w.push_back(atom.weight.get_num() * (out.scale / atom.weight.get_den()));
  return out;
}

struct OracleVerdict {
  /// Positive cells, screening off, co-monotone ordering.
  bool definition = false;
  /// The above plus 0 < p(A|C_i), p(B|C_i) < 1 in every cell.
  bool strict = false;
};

/// Decides both verdicts from block membership alone.
inline OracleVerdict judge(const IntegerWeights& iw, const std::vector<bool>& in_a,
                           const std::vector<bool>& in_b, std::span<const std::size_t> block_of,
                           std::size_t n) {
  std::vector<mpz_class> W(n, 0), WA(n, 0), WB(n, 0), WAB(n, 0);
  for (std::size_t j = 0; j < block_of.size(); ++j) {
    const auto i = block_of[j];
    W[i] += iw.w[j];
    if (in_a[j]) WA[i] += iw.w[j];
    if (in_b[j]) WB[i] += iw.w[j];
    if (in_a[j] && in_b[j]) WAB[i] += iw.w[j];
  }
  OracleVerdict v;
  if (n < 2) return v;
  bool interior = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (W[i] <= 0) return v;
    if (WAB[i] * W[i] != WA[i] * WB[i]) return v;
    interior = interior && WA[i] > 0 && WA[i] < W[i] && WB[i] > 0 && WB[i] < W[i];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const mpz_class da = WA[i] * W[j] - WA[j] * W[i];
      const mpz_class db = WB[i] * W[j] - WB[j] * W[i];
      if (sgn(da) * sgn(db) <= 0) return v;
    }
  v.definition = true;
  v.strict = interior;
  return v;
}

namespace detail {

inline std::vector<bool> membership(const Event& e, std::size_t k) {
  std::vector<bool> out(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = e.contains(j);
  return out;
}

}  // namespace detail

inline OracleVerdict judge_partition(const ProbSpace& space, const Event& A, const Event& B,
                                     const Partition& partition) {
  const std::size_t k = space.size();
  std::vector<std::size_t> block_of(k, 0);
  for (std::size_t i = 0; i < partition.size(); ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (partition[i].contains(j)) block_of[j] = i;
  return judge(integer_weights(space), detail::membership(A, k), detail::membership(B, k),
               block_of, partition.size());
}

/// Independent re-derivation of verify_rccs(...).verdict.
inline bool verify_by_enumeration(const ProbSpace& space, const Event& A, const Event& B,
                                  const Partition& partition) {
  return judge_partition(space, A, B, partition).strict;
}

struct EnumerationResult {
  std::vector<Partition> found;
  std::size_t examined = 0;
};

/// Every n-block partition of the atoms that is a common cause system for
/// (A, B), in restricted-growth-string order.
inline EnumerationResult enumerate_rccs(const ProbSpace& space, const Event& A, const Event& B,
                                        std::size_t n, const SearchBudget& budget = {}) {
  if (n < 2) throw Error(ErrorCode::SizeTooSmall, "a common cause system needs at least 2 cells");
  const std::size_t k = space.size();
  EnumerationResult out;
  if (n > k) return out;
  if (k > budget.max_atoms)
    throw Error(ErrorCode::BudgetExceeded, std::to_string(k) + " atoms exceed the budget of " +
                                               std::to_string(budget.max_atoms));
  if (n > budget.max_partition_size)
    throw Error(ErrorCode::BudgetExceeded, "partition size " + std::to_string(n) + " exceeds budget");
  const mpz_class total = stirling2(k, n);
  if (total > static_cast<unsigned long>(budget.max_partitions))
    throw Error(ErrorCode::BudgetExceeded, total.get_str() + " partitions exceed the budget of " +
                                               std::to_string(budget.max_partitions));

  const auto iw = integer_weights(space);
  const auto in_a = detail::membership(A, k), in_b = detail::membership(B, k);
  for_each_set_partition(k, n, [&](std::span<const std::size_t> rgs) {
    ++out.examined;
    if (judge(iw, in_a, in_b, rgs, n).strict) {
      std::vector<std::vector<std::size_t>> blocks(n);
      for (std::size_t j = 0; j < k; ++j) blocks[rgs[j]].push_back(j);
      std::vector<Event> cells;
      for (const auto& b : blocks) cells.push_back(space.event_from_indices(b));
      out.found.push_back(validate_partition(space, std::move(cells)));
    }
    return true;
  });
  return out;
}

}  // namespace rccs::oracle
