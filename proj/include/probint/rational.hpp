#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace probint {

/// Arbitrary-precision exact rational. Every probability in the library is
/// one of these; there are no floating-point comparisons anywhere.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Parses "3", "0.35", ".5", "9/13" (optionally signed). Throws
/// ValidationError on anything else or on a zero denominator.
Rational parse_rational(std::string_view text);

/// Exact rendering: "21/160", "1", "0".
std::string to_fraction_string(const Rational& value);

/// Presentation-only decimal rendering rounded half-up to `places` digits.
std::string to_decimal_string(const Rational& value, int places = 6);

}  // namespace probint
