#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace rrc {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational ratio(long long num, long long den = 1) { return Rational(num, den); }

/// "num/den", or just "num" for integers.
std::string to_exact(const Rational& q);
/// Decimal rendering rounded half away from zero to `places` digits.
std::string to_decimal(const Rational& q, int places = 6);
/// Accepts "a", "a/b" or a plain decimal such as "0.25".
Rational parse_rational(const std::string& text);

}  // namespace rrc
