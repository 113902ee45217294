#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "rccs/error.hpp"

namespace rccs {

/// Exact rational. GMP keeps every value canonical: lowest terms, positive
/// denominator.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

namespace detail {

inline bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

}  // namespace detail

/// Parses "p/q" or "p". Rejects zero denominators, signs on the
/// denominator, whitespace and anything GMP would silently accept.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!detail::is_integer_literal(num) || !detail::is_integer_literal(den) ||
      den.front() == '-' || den.front() == '+')
    throw Error(ErrorCode::ParseError, "malformed rational \"" + std::string(text) + "\"");
  mpz_class n(std::string(num.front() == '+' ? num.substr(1) : num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0)
    throw Error(ErrorCode::ParseError, "zero denominator in \"" + std::string(text) + "\"");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// Lowest-terms "p/q"; integral values print without the "/1".
inline std::string to_string(const Rational& r) { return r.get_str(10); }

inline double to_double(const Rational& r) { return r.get_d(); }

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_positive(const Rational& r) { return sgn(r) > 0; }

/// True iff 0 < r < 1.
inline bool in_open_unit(const Rational& r) { return sgn(r) > 0 && r < 1; }
/// True iff 0 <= r <= 1.
inline bool in_closed_unit(const Rational& r) { return sgn(r) >= 0 && r <= 1; }

}  // namespace rccs
