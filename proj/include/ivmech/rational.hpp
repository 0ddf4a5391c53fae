#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ivmech {

using Rational = mpq_class;

// Parses "p/q" or "p". Throws Error(ParseError) on malformed input or q = 0.
Rational parse_rational(std::string_view text);

// Canonical "p/q" form; integers print without the denominator.
std::string to_string(const Rational& q);

// Display-only decimal rendering with the given number of fractional digits.
std::string to_decimal(const Rational& q, int digits = 6);

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace ivmech
