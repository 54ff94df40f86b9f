#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace smallext {

/* Exact arithmetic sits on GMP throughout.  mpq_class is already the reduced
 * numerator/denominator pair with positive denominator, which is exactly the
 * invariant we need, so Rational is a type alias rather than a wrapper. */
using Rational = mpq_class;
using Integer  = mpz_class;

inline int sgn(const Rational& q) { return ::sgn(q); }
inline int sgn(const Integer& z)  { return ::sgn(z); }

/// Largest integer <= q.
Integer floor_int(const Rational& q);

/// Smallest integer >= q.
Integer ceil_int(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Parse "a/b" or "a" (optional sign, decimal digits).  Throws parse_error.
Rational parse_rational(const std::string& text);

/// Canonical "a/b" or "a" rendering.
std::string rational_to_string(const Rational& q);

/// p^e for rational e demands e integral here; negative exponents allowed.
Rational integer_power(const Integer& base, const Integer& exponent);

/* The rational of smallest denominator (ties broken by smallest |numerator|,
 * then by sign toward zero) inside the interval with the given endpoint
 * openness.  `hi == nullopt` means unbounded above.  Implemented as the
 * classical continued-fraction walk, so denominators never overshoot.
 * Throws domain_error when the interval is empty. */
Rational simplest_rational_between(const Rational& lo, bool open_lo,
                                   const std::optional<Rational>& hi, bool open_hi);

} // namespace smallext
