#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rccs/admissibility.hpp"

namespace rccs {

enum class ConstructionMode {
  /// Only the starred conditions; Σ c_i d_i is left wherever it lands.
  Literal,
  /// Additionally Σ c_i d_i = p(A∧B), which is what an extension needs.
  Realizable,
};

/// Geometric retry schedule standing in for "small enough" cell weights.
struct Schedule {
  Rational epsilon{1, 64};
  Rational shrink{1, 2};
  int max_retries = 64;
};

struct ConstructionRequest {
  CorrelationSummary target;
  std::size_t n = 2;
  ConstructionMode mode = ConstructionMode::Realizable;
  Schedule schedule;
};

/// The last cell's numbers, fixed by the leading n−1 cells and the targets.
struct TailCompletion {
  Rational a_n, b_n, c_n, d_n;
};

/// a_n = (a − Σ c_k a_k)/(1 − Σ c_k), likewise b_n; c_n = 1 − Σ c_k;
/// d_n = (a − Σ a_k c_k)(b − Σ b_k c_k)/(1 − Σ c_k)², which is a_n·b_n.
inline TailCompletion complete_tail(std::span<const Rational> a, std::span<const Rational> b,
                                    std::span<const Rational> c,
                                    const CorrelationSummary& target) {
  if (a.size() != c.size() || b.size() != c.size())
    throw Error(ErrorCode::InvalidArgument, "leading parameter lists differ in length");
  Rational sum_c, sum_ac, sum_bc;
  for (std::size_t k = 0; k < c.size(); ++k) {
    sum_c += c[k];
    sum_ac += a[k] * c[k];
    sum_bc += b[k] * c[k];
  }
  if (sum_c >= 1)
    throw Error(ErrorCode::DegenerateTail,
                "leading cell weights sum to " + to_string(sum_c) + ", leaving no mass for the tail");
  const Rational rest = 1 - sum_c;
  const Rational ra = target.a - sum_ac;
  const Rational rb = target.b - sum_bc;
  return {Rational(ra / rest), Rational(rb / rest), rest, Rational(ra * rb / (rest * rest))};
}

/// Solves for b_{n−1} so that Σ_{i=1..n} c_i a_i b_i = p(A∧B) once the tail is
/// completed. With a_n fixed by the a's, the joint sum is affine in b_{n−1}:
///   J = Σ_{k<n−1} c_k a_k b_k + a_n (b − Σ_{k<n−1} c_k b_k)
///       + c_{n−1}(a_{n−1} − a_n) b_{n−1}.
/// `b_fixed` holds b_1..b_{n−2}; `a` and `c` hold n−1 entries each.
inline Rational solve_joint_constraint(std::span<const Rational> a,
                                       std::span<const Rational> b_fixed,
                                       std::span<const Rational> c,
                                       const CorrelationSummary& target) {
  if (a.empty() || a.size() != c.size() || b_fixed.size() + 1 != a.size())
    throw Error(ErrorCode::InvalidArgument, "expected n-1 a's and c's and n-2 fixed b's");
  const std::size_t m = a.size() - 1;  // index of cell n−1
  Rational sum_c, sum_ac;
  for (std::size_t k = 0; k <= m; ++k) {
    sum_c += c[k];
    sum_ac += a[k] * c[k];
  }
  if (sum_c >= 1) throw Error(ErrorCode::DegenerateTail, "no mass left for the tail cell");
  const Rational a_n = (target.a - sum_ac) / (1 - sum_c);
  const Rational coefficient = c[m] * (a[m] - a_n);
  if (is_zero(coefficient))
    throw Error(ErrorCode::SingularSolve, "c_{n-1}(a_{n-1} - a_n) = 0; b_{n-1} is unconstrained");
  Rational s_ab, s_b;
  for (std::size_t k = 0; k < m; ++k) {
    s_ab += c[k] * a[k] * b_fixed[k];
    s_b += c[k] * b_fixed[k];
  }
  return Rational((target.pAB - s_ab - a_n * (target.b - s_b)) / coefficient);
}

namespace detail {

inline AdmissibleStarSet assemble(std::vector<Rational> a, std::vector<Rational> b,
                                  std::vector<Rational> c, const CorrelationSummary& target) {
  const TailCompletion tail = complete_tail(a, b, c, target);
  a.push_back(tail.a_n);
  b.push_back(tail.b_n);
  c.push_back(tail.c_n);
  AdmissibleStarSet s{std::move(a), std::move(b), std::move(c), {}, target};
  for (std::size_t i = 0; i < s.n(); ++i) s.d.push_back(s.a[i] * s.b[i]);
  return s;
}

inline bool accepted(const AdmissibleStarSet& s, ConstructionMode mode) {
  const auto report = check_admissible_star(s);
  return report.verdict && (mode == ConstructionMode::Literal || report.joint_sum_matches);
}

/// Low cell of a two-cell realizable solution: weight c, conditionals
/// (a_lo, b_lo); the high cell takes the rest.
struct Core {
  Rational c, a_lo, b_lo, a_hi, b_hi;
};

/// Two-cell realizable solutions form an open set parametrised by the low
/// cell's weight c and its p(A|·) = a·t, t in (0, 1). Scans dyadic grids of
/// increasing depth over (c, t); first feasible point wins.
inline std::optional<Core> find_core(const CorrelationSummary& target, int max_depth = 12) {
  for (int depth = 1; depth <= max_depth; ++depth) {
    const long den = 1L << depth;
    for (long cn = 1; cn < den; ++cn) {
      for (long tn = 1; tn < den; ++tn) {
        if (depth > 1 && cn % 2 == 0 && tn % 2 == 0) continue;  // seen at a coarser depth
        const Rational c = make_rational(cn, den), alpha = target.a * make_rational(tn, den);
        std::vector<Rational> lead_a{alpha}, lead_c{c};
        Rational b_lo;
        try {
          b_lo = solve_joint_constraint(lead_a, {}, lead_c, target);
        } catch (const Error&) {
          continue;
        }
        auto set = assemble(lead_a, {b_lo}, lead_c, target);
        if (accepted(set, ConstructionMode::Realizable))
          return Core{c, alpha, b_lo, set.a[1], set.b[1]};
      }
    }
  }
  return std::nullopt;
}

inline Rational dyadic(const Rational& epsilon, std::size_t i) {
  Rational r = epsilon;
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(i));
  return r;
}

}  // namespace detail

/// Builds an admissible* set of size n for the target pair.
///
/// Literal mode: cells 1..n−1 get weights ε·2^{−i} and conditionals a·i/n,
/// b·i/n, all below the marginals; the tail cell absorbs the rest. As ε
/// shrinks the tail converges to (a, b), so every strict inequality
/// eventually holds.
///
/// Realizable mode: first a two-cell realizable core (low, high) is located
/// on a dyadic grid. Cells 1..n−2 are tiny (ε·2^{−i}) with conditionals
/// strictly between the core's low and high points; cell n−1 keeps the
/// core's weight and p(A|·), its p(B|·) is re-solved so the joint sum stays
/// exact, and the tail completes the rest. As ε shrinks the big cells
/// converge to the core.
///
/// Every returned set has passed check_admissible_star (and the joint-sum
/// check in realizable mode).
inline AdmissibleStarSet construct_admissible_star(const ConstructionRequest& req) {
  const auto& t = req.target;
  const auto& sched = req.schedule;
  if (req.n < 2) throw Error(ErrorCode::SizeTooSmall, "n must be at least 2");
  if (!in_open_unit(sched.shrink))
    throw Error(ErrorCode::InvalidArgument, "shrink factor must lie in (0, 1)");
  if (!in_open_unit(sched.epsilon))
    throw Error(ErrorCode::InvalidArgument, "initial epsilon must lie in (0, 1)");
  if (sched.max_retries < 1) throw Error(ErrorCode::InvalidArgument, "max retries must be >= 1");
  if (!t.positive())
    throw Error(ErrorCode::NotCorrelated, "gamma = " + to_string(t.gamma) + " is not positive");
  if (req.mode == ConstructionMode::Realizable && t.strict())
    throw Error(ErrorCode::StrictCorrelationUnsupported,
                "a quadrant of the target has probability 0, but open bounds on a_i, b_i force "
                "every quadrant sum c_i a_i(1-b_i) etc. to be positive");

  const std::size_t n = req.n;
  Rational epsilon = sched.epsilon;

  if (req.mode == ConstructionMode::Literal) {
    for (int attempt = 0; attempt < sched.max_retries; ++attempt, epsilon *= sched.shrink) {
      std::vector<Rational> a, b, c;
      for (std::size_t i = 1; i < n; ++i) {
        c.push_back(detail::dyadic(epsilon, i));
        a.push_back(t.a * make_rational(static_cast<long>(i), static_cast<long>(n)));
        b.push_back(t.b * make_rational(static_cast<long>(i), static_cast<long>(n)));
      }
      auto set = detail::assemble(std::move(a), std::move(b), std::move(c), t);
      if (detail::accepted(set, req.mode)) return set;
    }
    throw Error(ErrorCode::NoFeasibleParameters, "retry schedule exhausted in literal mode");
  }

  const auto core = detail::find_core(t);
  if (!core)
    throw Error(ErrorCode::NoFeasibleParameters, "no two-cell realizable core on the search grid");

  for (int attempt = 0; attempt < sched.max_retries; ++attempt, epsilon *= sched.shrink) {
    std::vector<Rational> a, b, c;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const Rational share = make_rational(static_cast<long>(i), static_cast<long>(n - 1));
      c.push_back(detail::dyadic(epsilon, i));
      a.push_back(core->a_lo + share * (core->a_hi - core->a_lo));
      b.push_back(core->b_lo + share * (core->b_hi - core->b_lo));
    }
    a.push_back(core->a_lo);
    c.push_back(core->c);
    Rational sum_c;
    for (const auto& x : c) sum_c += x;
    if (sum_c >= 1) continue;
    Rational b_low;
    try {
      b_low = solve_joint_constraint(a, b, c, t);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SingularSolve) continue;
      throw;
    }
    b.push_back(b_low);
    auto set = detail::assemble(std::move(a), std::move(b), std::move(c), t);
    if (detail::accepted(set, req.mode)) return set;
  }
  throw Error(ErrorCode::NoFeasibleParameters, "retry schedule exhausted in realizable mode");
}

}  // namespace rccs
