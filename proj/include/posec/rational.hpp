#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace posec {

// Arbitrary-precision rational; every exact probability in the toolkit uses it.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// "p/q" in lowest terms, or just "p" when q == 1.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

// Accepts "p/q", an integer, or a finite decimal such as "0.25" or "1e-3".
// Throws ParseError on anything else.
Rational parse_rational(std::string_view text);

// The exact binary value of a finite double.
Rational rational_from_double(double value);

}  // namespace posec
