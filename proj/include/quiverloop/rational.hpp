#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace quiverloop {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "p/q", plain integers and finite decimals ("0.2", "-1.5e-3").
// Decimals are converted exactly, so "0.2" is 1/5.
Rational parse_rational(std::string_view text);

// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

}  // namespace quiverloop
