#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rccs/admissibility.hpp"
#include "rccs/forks.hpp"

namespace rccs {

/// r[k][i]: share of quadrant k's mass (AB, AB̄, ĀB, ĀB̄) sent to cell i.
struct SplitWeights {
  std::array<std::vector<Rational>, 4> r;
};

/// An extension (Ω′, p′) together with the embedding h, given atom-wise:
/// h(X) is the set of all children of atoms of X.
struct ExtensionResult {
  ProbSpace new_space;
  /// parent_of[j] = index in the original space of new atom j.
  std::vector<std::size_t> parent_of;
  Partition rccs;
  SplitWeights weights;

  /// h(X). `x` must be an event of the original space the result was built from.
  Event lift(const Event& x) const {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < parent_of.size(); ++j)
      if (x.contains(parent_of[j])) idx.push_back(j);
    return new_space.event_from_indices(idx);
  }
};

namespace detail {

inline std::array<std::vector<Rational>, 4> weight_numerators(const AdmissibleStarSet& s) {
  std::array<std::vector<Rational>, 4> num;
  for (std::size_t i = 0; i < s.n(); ++i) {
    const Rational cd = s.c[i] * s.d[i];
    num[0].push_back(cd);
    num[1].push_back(s.c[i] * s.a[i] - cd);
    num[2].push_back(s.c[i] * s.b[i] - cd);
    num[3].push_back(s.c[i] - s.c[i] * s.a[i] - s.c[i] * s.b[i] + cd);
  }
  return num;
}

}  // namespace detail

/// Splits every positive-weight atom x of quadrant k into children
/// "<label>#<i>" (i = 1..n) of weight p(x)·r[k][i], with
///   r[0][i] = c_i d_i / p(A∧B)
///   r[1][i] = (c_i a_i − c_i d_i) / p(A∧B̄)
///   r[2][i] = (c_i b_i − c_i d_i) / p(Ā∧B)
///   r[3][i] = (c_i − c_i a_i − c_i b_i + c_i d_i) / p(Ā∧B̄).
/// Null atoms are carried into cell 1 as a single child. C_i collects the
/// i-th children. The result is re-verified before it is returned.
inline ExtensionResult extend_with_rccs(const ProbSpace& space, const Event& A, const Event& B,
                                        const AdmissibleStarSet& set) {
  const auto check = check_admissible_star(set);
  if (!check.verdict) throw Error(ErrorCode::NotAdmissible, "number set fails the starred conditions");
  const auto summary = correlation_summary(space, A, B);
  const std::size_t n = set.n();

  const auto numerators = detail::weight_numerators(set);
  for (std::size_t k = 0; k < 4; ++k) {
    if (!is_zero(summary.quadrants[k])) continue;
    for (const auto& x : numerators[k])
      if (!is_zero(x))
        throw Error(ErrorCode::ZeroQuadrantMismatch,
                    "quadrant " + std::to_string(k + 1) +
                        " has probability 0 but the number set assigns it positive mass; a "
                        "strictly correlated pair cannot be split this way");
  }
  if (set.target.a != summary.a || set.target.b != summary.b || set.target.pAB != summary.pAB)
    throw Error(ErrorCode::NotRealizable, "number set targets a different pair profile than the space");
  if (check.joint_sum != summary.pAB)
    throw Error(ErrorCode::NotRealizable, "sum c_i d_i = " + to_string(check.joint_sum) +
                                              " differs from p(A and B) = " + to_string(summary.pAB));

  ExtensionResult out{space, {}, validate_partition(space, {space.whole()}), {}};
  for (std::size_t k = 0; k < 4; ++k) {
    if (is_zero(summary.quadrants[k])) continue;
    Rational total;
    for (const auto& x : numerators[k]) {
      out.weights.r[k].push_back(x / summary.quadrants[k]);
      if (sgn(out.weights.r[k].back()) < 0)
        throw Error(ErrorCode::NotRealizable, "negative split weight in quadrant " + std::to_string(k + 1));
      total += out.weights.r[k].back();
    }
    if (total != 1)
      throw Error(ErrorCode::NotRealizable,
                  "split weights of quadrant " + std::to_string(k + 1) + " sum to " + to_string(total));
  }

  std::vector<Atom> atoms;
  std::vector<std::vector<std::size_t>> cells(n);
  for (std::size_t x = 0; x < space.size(); ++x) {
    const auto& parent = space.atom(x);
    if (is_zero(parent.weight)) {
      cells[0].push_back(atoms.size());
      out.parent_of.push_back(x);
      atoms.push_back({parent.label + "#1", Rational(0)});
      continue;
    }
    const auto k = static_cast<std::size_t>(quadrant_of(A, B, x));
    for (std::size_t i = 0; i < n; ++i) {
      cells[i].push_back(atoms.size());
      out.parent_of.push_back(x);
      atoms.push_back({parent.label + "#" + std::to_string(i + 1),
                       Rational(parent.weight * out.weights.r[k][i])});
    }
  }
  out.new_space = ProbSpace(std::move(atoms));
  std::vector<Event> cell_events;
  for (const auto& idx : cells) cell_events.push_back(out.new_space.event_from_indices(idx));
  out.rccs = validate_partition(out.new_space, std::move(cell_events));

  const Event hA = out.lift(A), hB = out.lift(B);
  if (!verify_rccs(out.new_space, hA, hB, out.rccs).verdict ||
      extract_admissible_star(out.new_space, hA, hB, out.rccs) != set ||
      correlation_summary(out.new_space, hA, hB) != summary)
    throw std::logic_error("extension failed its own re-verification");
  return out;
}

struct HomomorphismReport {
  bool parent_map_valid = false;
  bool injective = false;
  bool preserves_complement = false;
  bool preserves_meet = false;
  bool preserves_join = false;
  bool preserves_measure = false;
  bool exhaustive = false;
  std::size_t events_checked = 0;
  std::string first_failure;
  bool verdict = false;
};

/// Largest original space whose full event algebra is swept.
inline constexpr std::size_t kExhaustiveAtomLimit = 12;
/// Events drawn (fixed seed) when the algebra is too large to sweep.
inline constexpr std::size_t kSampledEvents = 4096;
inline constexpr std::uint64_t kSampleSeed = 0x5eedc0de;

/// Checks that the parent map defines an injective, complement-, meet- and
/// join-preserving embedding with p′(h(X)) = p(X). Measures are compared
/// over every event when the original space has at most 12 atoms; otherwise
/// over all singletons plus 4096 events from a fixed-seed generator.
/// Lattice operations are checked on consecutive pairs of that family.
inline HomomorphismReport verify_homomorphism(const ExtensionResult& result,
                                              const ProbSpace& original) {
  HomomorphismReport r;
  auto fail = [&r](const std::string& what) {
    if (r.first_failure.empty()) r.first_failure = what;
  };

  r.parent_map_valid = result.parent_of.size() == result.new_space.size();
  std::vector<std::size_t> children(original.size(), 0);
  for (auto p : result.parent_of) {
    if (p >= original.size()) {
      r.parent_map_valid = false;
      break;
    }
    ++children[p];
  }
  if (!r.parent_map_valid) {
    fail("parent map does not cover the new atoms or points outside the original space");
    return r;
  }
  r.injective = true;
  for (std::size_t x = 0; x < original.size(); ++x)
    if (children[x] == 0) {
      r.injective = false;
      fail("atom " + original.atom(x).label + " has no image");
    }

  std::vector<Event> family;
  const std::size_t k = original.size();
  r.exhaustive = k <= kExhaustiveAtomLimit;
  if (r.exhaustive) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask)
      family.push_back(original.event_from_bits(boost::dynamic_bitset<>(k, mask)));
  } else {
    for (std::size_t x = 0; x < k; ++x) {
      const std::size_t idx[] = {x};
      family.push_back(original.event_from_indices(idx));
    }
    std::mt19937_64 rng(kSampleSeed);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t s = 0; s < kSampledEvents; ++s) {
      boost::dynamic_bitset<> bits(k);
      for (std::size_t x = 0; x < k; ++x) bits[x] = coin(rng);
      family.push_back(original.event_from_bits(std::move(bits)));
    }
  }

  r.preserves_complement = r.preserves_meet = r.preserves_join = r.preserves_measure = true;
  std::vector<Event> images;
  images.reserve(family.size());
  for (const auto& x : family) images.push_back(result.lift(x));
  for (std::size_t e = 0; e < family.size(); ++e) {
    const Event& x = family[e];
    const Event& hx = images[e];
    if (result.lift(~x) != ~hx) {
      r.preserves_complement = false;
      fail("complement of {" + std::to_string(e) + "}");
    }
    const std::size_t f = (e + 1) % family.size();
    if (result.lift(x & family[f]) != (hx & images[f])) {
      r.preserves_meet = false;
      fail("meet of family members " + std::to_string(e) + "," + std::to_string(f));
    }
    if (result.lift(x | family[f]) != (hx | images[f])) {
      r.preserves_join = false;
      fail("join of family members " + std::to_string(e) + "," + std::to_string(f));
    }
    if (probability(result.new_space, hx) != probability(original, x)) {
      r.preserves_measure = false;
      fail("measure of family member " + std::to_string(e));
    }
  }
  r.events_checked = family.size();
  r.verdict = r.parent_map_valid && r.injective && r.preserves_complement && r.preserves_meet &&
              r.preserves_join && r.preserves_measure;
  return r;
}

}  // namespace rccs
