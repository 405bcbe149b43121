#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace tnnflow {

using Rational = mpq_class;
using RatVector = std::vector<Rational>;

/// Exact conversion of a finite binary64 value.
Rational rational_from_double(double x);

/// Nearest rational with denominator 2^bits.
Rational rational_round(double x, int bits = 20);

/// "p/q" (or "p" for integers), canonicalized.
std::string to_fraction_string(const Rational& q);
Rational parse_fraction(const std::string& s);

/// Decimal string with 17 significant digits.
std::string to_decimal_string(double x);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace tnnflow
