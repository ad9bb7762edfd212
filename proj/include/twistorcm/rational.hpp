#ifndef TWISTORCM_RATIONAL_HPP
#define TWISTORCM_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace twistorcm::exactalg {

// Exact arithmetic scalars.  mpq_class keeps the canonical form
// (gcd(|num|, den) = 1, den > 0) through all arithmetic, which is exactly the
// invariant this project needs, so there is no wrapper type.
using Rational = mpq_class;
using Integer  = mpz_class;

/// Build a rational from an integer pair, canonicalizing.  den must be nonzero.
Rational make_rational(const Integer& num, const Integer& den);

/// Parse "p", "-p", or "p/q" with arbitrary-precision parts.  Rejects q = 0,
/// embedded whitespace, and anything that is not an exact integer pair.
Rational parse_rational(const std::string& text);

/// Canonical "p/q" (or "p" when q = 1).
std::string rational_to_string(const Rational& q);

/// Exact square test; when the value is a square the root (>= 0) is returned.
std::optional<Rational> rational_sqrt(const Rational& q);

/// lcm of the denominators of a list of rationals (>= 1).
Integer common_denominator(const std::vector<Rational>& values);

inline int sign_of(const Rational& q) { return sgn(q); }

} // namespace twistorcm::exactalg

#endif
