#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace mesoheat {

/// Arbitrary-precision integer / rational scalars used wherever results must
/// be exact. Floating point never enters a derivation done in these types.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& r);

/// Exact binary value of a double as a rational (no decimal rounding).
Rational rational_from_double(double x);

/// Parses "3", "-7/12", "0.25" or "2.5e-3" into an exact rational.
/// Decimal forms are read in base ten, so "0.1" is exactly 1/10.
Rational parse_rational(const std::string& text);

/// "num/den" in lowest terms, or plain "num" when the denominator is one.
std::string format_rational(const Rational& r);

/// base^exp with integer exponent; exp < 0 inverts (base must be nonzero).
Rational rational_pow(const Rational& base, int exp);

BigInt factorial(int n);

}  // namespace mesoheat
