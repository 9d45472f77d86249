#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace glround {

/// Arbitrary-precision rational, always canonical (lowest terms, positive denominator).
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "12", "-9", "1/3", "-4/6" (canonicalized). Throws ParseError.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

bool is_integer(const Rational& q);

/// Nearest double; saturates to +-inf for magnitudes beyond double range.
double to_double(const Rational& q);

/// log|q| without overflow, valid for entries with thousands of digits. q must be nonzero.
double log_abs(const Rational& q);

/// Smallest e with 2^e >= q for q > 0, i.e. ceil(log2 q).
long ceil_log2(const Rational& q);

/// 2^e as a rational, e may be negative.
Rational pow2(long e);

Rational pow(const Rational& base, unsigned long exponent);

}  // namespace glround
