#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace loopm {

/// Exact rational; GMP keeps it canonical (den > 0, gcd = 1).
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);

/// "7/10" or "-3" or "0.7" (decimals are converted exactly).
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Rational pow(const Rational& base, long exponent);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

double to_double(const Rational& q);

}  // namespace loopm
