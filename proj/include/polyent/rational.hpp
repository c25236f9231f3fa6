#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace polyent {

using Rational = mpq_class;

// Accepts "p/q", integers, and finite decimals ("0.125", "-2.5e-3").
// Decimal input is converted exactly (0.1 becomes 1/10, not the nearest double).
Rational parse_rational(std::string_view text);

// Exact value of a finite double (a dyadic rational).
Rational rational_from_double(double x);

std::string to_string(const Rational& r);

// Rounds toward zero; the only floating-point error in the estimation path.
inline double to_double(const Rational& r) { return r.get_d(); }

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace polyent
