#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qtrace {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p/q", "p" or "-p/q". Throws std::invalid_argument on malformed input
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical decimal form: "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

/// Returns the value as a long; throws std::overflow_error when it is not an
/// integer that fits.
long to_long(const Rational& r);

Integer factorial(unsigned long n);
Integer binomial(long n, long k);

}  // namespace qtrace
