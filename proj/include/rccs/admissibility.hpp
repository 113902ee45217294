#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rccs/forks.hpp"
#include "rccs/prob_space.hpp"

namespace rccs {

/// 3n numbers (a_i, b_i, c_i) proposed as the conditionals p(A|C_i),
/// p(B|C_i) and cell weights p(C_i) of a common cause system.
struct AdmissibleSet {
  std::vector<Rational> a, b, c;
  CorrelationSummary target;

  std::size_t n() const noexcept { return c.size(); }
};

/// The 4n numbers (a_i, b_i, c_i, d_i); d_i stands for p(A∧B|C_i).
struct AdmissibleStarSet {
  std::vector<Rational> a, b, c, d;
  CorrelationSummary target;

  std::size_t n() const noexcept { return c.size(); }
  friend bool operator==(const AdmissibleStarSet&, const AdmissibleStarSet&) = default;
};

struct Condition {
  std::string id;
  bool holds = false;
  std::string detail;  // first offending index or value, empty when it holds
};

struct AdmissibilityReport {
  std::vector<Condition> conditions;
  bool verdict = false;
  Rational sum_ac, sum_bc, sum_c;
  /// Σ a_i b_i c_i for admissible sets, Σ c_i d_i for admissible* sets.
  Rational joint_sum;
  /// Only meaningful for admissible* sets: whether joint_sum = p(A∧B).
  /// Kept out of `verdict` because the starred definition does not list it.
  bool joint_sum_matches = false;

  const Condition* find(const std::string& id) const {
    for (const auto& c : conditions)
      if (c.id == id) return &c;
    return nullptr;
  }
  bool holds(const std::string& id) const {
    const auto* c = find(id);
    return c != nullptr && c->holds;
  }
};

namespace detail {

inline Condition check_sum(std::string id, const Rational& actual, const Rational& expected) {
  Condition c{std::move(id), actual == expected, {}};
  if (!c.holds) c.detail = to_string(actual) + " != " + to_string(expected);
  return c;
}

inline Condition check_ordering(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (!is_positive(Rational((a[i] - a[j]) * (b[i] - b[j]))))
        return {"ordering", false,
                "cells " + std::to_string(i + 1) + "," + std::to_string(j + 1)};
  return {"ordering", true, {}};
}

template <typename Pred>
Condition check_each(std::string id, const std::vector<Rational>& xs, Pred pred,
                     const char* name) {
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!pred(xs[i]))
      return {std::move(id), false,
              std::string(name) + "_" + std::to_string(i + 1) + " = " + to_string(xs[i])};
  return {std::move(id), true, {}};
}

inline void finish(AdmissibilityReport& r) {
  r.verdict = true;
  for (const auto& c : r.conditions) r.verdict = r.verdict && c.holds;
}

}  // namespace detail

/// The original sum-of-products admissibility conditions. Bounds on a_i, b_i
/// are closed, bounds on c_i open.
inline AdmissibilityReport check_admissible(const AdmissibleSet& s) {
  AdmissibilityReport r;
  const std::size_t n = s.n();
  if (n < 2 || s.a.size() != n || s.b.size() != n) {
    r.conditions.push_back({"shape", false, "need three lists of equal length n >= 2"});
    return r;
  }
  r.conditions.push_back({"shape", true, {}});
  for (std::size_t i = 0; i < n; ++i) {
    r.sum_ac += s.a[i] * s.c[i];
    r.sum_bc += s.b[i] * s.c[i];
    r.joint_sum += s.a[i] * s.b[i] * s.c[i];
    r.sum_c += s.c[i];
  }
  r.conditions.push_back(detail::check_sum("sum_ac", r.sum_ac, s.target.a));
  r.conditions.push_back(detail::check_sum("sum_bc", r.sum_bc, s.target.b));
  r.conditions.push_back(detail::check_sum("sum_abc", r.joint_sum, s.target.pAB));
  r.conditions.push_back(detail::check_sum("sum_c", r.sum_c, Rational(1)));
  r.conditions.push_back(detail::check_ordering(s.a, s.b));
  auto closed = [](const Rational& x) { return in_closed_unit(x); };
  auto open = [](const Rational& x) { return in_open_unit(x); };
  auto bounds_a = detail::check_each("bounds_ab", s.a, closed, "a");
  r.conditions.push_back(bounds_a.holds ? detail::check_each("bounds_ab", s.b, closed, "b")
                                        : bounds_a);
  r.conditions.push_back(detail::check_each("bounds_c", s.c, open, "c"));
  r.joint_sum_matches = r.joint_sum == s.target.pAB;
  detail::finish(r);
  return r;
}

/// The starred conditions: linear sums, per-cell products d_i = a_i b_i,
/// co-monotone ordering, and open bounds on every a_i, b_i, c_i, d_i.
inline AdmissibilityReport check_admissible_star(const AdmissibleStarSet& s) {
  AdmissibilityReport r;
  const std::size_t n = s.n();
  if (n < 2 || s.a.size() != n || s.b.size() != n || s.d.size() != n) {
    r.conditions.push_back({"shape", false, "need four lists of equal length n >= 2"});
    return r;
  }
  r.conditions.push_back({"shape", true, {}});
  for (std::size_t i = 0; i < n; ++i) {
    r.sum_ac += s.a[i] * s.c[i];
    r.sum_bc += s.b[i] * s.c[i];
    r.joint_sum += s.c[i] * s.d[i];
    r.sum_c += s.c[i];
  }
  r.conditions.push_back(detail::check_sum("sum_ac", r.sum_ac, s.target.a));
  r.conditions.push_back(detail::check_sum("sum_bc", r.sum_bc, s.target.b));
  r.conditions.push_back(detail::check_sum("sum_c", r.sum_c, Rational(1)));
  Condition product{"product_d", true, {}};
  for (std::size_t i = 0; i < n && product.holds; ++i)
    if (s.d[i] != s.a[i] * s.b[i]) {
      product.holds = false;
      product.detail = "d_" + std::to_string(i + 1) + " = " + to_string(s.d[i]) +
                       " != a_i b_i = " + to_string(Rational(s.a[i] * s.b[i]));
    }
  r.conditions.push_back(product);
  r.conditions.push_back(detail::check_ordering(s.a, s.b));
  auto open = [](const Rational& x) { return in_open_unit(x); };
  Condition bounds = detail::check_each("bounds_abd", s.a, open, "a");
  if (bounds.holds) bounds = detail::check_each("bounds_abd", s.b, open, "b");
  if (bounds.holds) bounds = detail::check_each("bounds_abd", s.d, open, "d");
  r.conditions.push_back(bounds);
  r.conditions.push_back(detail::check_each("bounds_c", s.c, open, "c"));
  r.joint_sum_matches = r.joint_sum == s.target.pAB;
  detail::finish(r);
  return r;
}

/// Reads off c_i = p(C_i), a_i = p(A|C_i), b_i = p(B|C_i), d_i = p(A∧B|C_i).
inline AdmissibleStarSet extract_admissible_star(const ProbSpace& space, const Event& A,
                                                 const Event& B, const Partition& partition) {
  AdmissibleStarSet s;
  s.target = correlation_summary(space, A, B);
  const Event AB = A & B;
  for (const auto& cell : partition) {
    s.c.push_back(probability(space, cell));
    s.a.push_back(conditional(space, A, cell));
    s.b.push_back(conditional(space, B, cell));
    s.d.push_back(conditional(space, AB, cell));
  }
  return s;
}

inline AdmissibleSet extract_admissible(const ProbSpace& space, const Event& A, const Event& B,
                                        const Partition& partition) {
  auto star = extract_admissible_star(space, A, B, partition);
  return {std::move(star.a), std::move(star.b), std::move(star.c), std::move(star.target)};
}

/// Decides "is this partition a common cause system" through the admissible*
/// route: extract the numbers and check them. Null cells cannot be extracted
/// and give false.
inline bool admissible_star_route(const ProbSpace& space, const Event& A, const Event& B,
                                  const Partition& partition) {
  for (const auto& cell : partition)
    if (is_zero(probability(space, cell))) return false;
  return check_admissible_star(extract_admissible_star(space, A, B, partition)).verdict;
}

struct DiagnosisReport {
  /// p(X∧Y|Z_i) − p(X|Z_i)p(Y|Z_i)
  std::vector<Rational> residuals;
  /// p(Z_i)·residual_i
  std::vector<Rational> weighted_defects;
  Rational defect_sum;
  AdmissibilityReport admissible;
  bool admissible_verdict = false;
  bool screening_verdict = false;

  /// The sum-of-products condition holds but some cell fails to screen off.
  bool cancellation() const { return admissible_verdict && !screening_verdict; }
};

inline DiagnosisReport diagnose_cancellation(const ProbSpace& space, const Event& X,
                                             const Event& Y, const Partition& partition) {
  DiagnosisReport r;
  const Event XY = X & Y;
  r.screening_verdict = true;
  for (const auto& cell : partition) {
    const Rational pz = probability(space, cell);
    Rational residual =
        conditional(space, XY, cell) - conditional(space, X, cell) * conditional(space, Y, cell);
    r.screening_verdict = r.screening_verdict && is_zero(residual);
    r.weighted_defects.push_back(pz * residual);
    r.defect_sum += r.weighted_defects.back();
    r.residuals.push_back(std::move(residual));
  }
  r.admissible = check_admissible(extract_admissible(space, X, Y, partition));
  r.admissible_verdict = r.admissible.verdict;
  return r;
}

/// Conditional profile of one cell: its weight and p(A|·), p(B|·), p(A∧B|·).
struct CellProfile {
  Rational c, a, b, d;
};

struct RealizedSpace {
  ProbSpace space;
  Event A;
  Event B;
  Partition partition;
};

/// Builds the smallest space realizing the given per-cell profiles: one atom
/// per (cell, quadrant), labelled "C<i>.<quadrant>", weighted
/// c·d, c·(a−d), c·(b−d), c·(1−a−b+d).
inline RealizedSpace realize_profile(const std::vector<CellProfile>& cells) {
  static constexpr const char* kQuadrant[] = {"AB", "AnB", "nAB", "nAnB"};
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& p = cells[i];
    const Rational w[4] = {p.d, p.a - p.d, p.b - p.d, 1 - p.a - p.b + p.d};
    for (int k = 0; k < 4; ++k) {
      if (sgn(w[k]) < 0)
        throw Error(ErrorCode::InvalidArgument,
                    "cell " + std::to_string(i + 1) + " profile needs a negative quadrant weight");
      atoms.push_back({"C" + std::to_string(i + 1) + "." + kQuadrant[k], Rational(p.c * w[k])});
    }
  }
  ProbSpace space(std::move(atoms));
  std::vector<std::size_t> a_idx, b_idx;
  std::vector<Event> cells_ev;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::size_t base = 4 * i;
    a_idx.insert(a_idx.end(), {base, base + 1});
    b_idx.insert(b_idx.end(), {base, base + 2});
    const std::size_t cell_idx[] = {base, base + 1, base + 2, base + 3};
    cells_ev.push_back(space.event_from_indices(cell_idx));
  }
  Event A = space.event_from_indices(a_idx);
  Event B = space.event_from_indices(b_idx);
  Partition partition = validate_partition(space, std::move(cells_ev));
  return {std::move(space), std::move(A), std::move(B), std::move(partition)};
}

/// Two equally weighted cells with p(A|C1)=1/4, p(A|C2)=1/8, p(B|C1)=1/3,
/// p(B|C2)=1/6, p(A∧B|C1)=1/24, p(A∧B|C2)=1/16. The sum-of-products
/// condition holds while neither cell screens off.
inline RealizedSpace realize_counterexample() {
  const Rational half(1, 2);
  return realize_profile({
      {half, Rational(1, 4), Rational(1, 3), Rational(1, 24)},
      {half, Rational(1, 8), Rational(1, 6), Rational(1, 16)},
  });
}

}  // namespace rccs
