#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace qdmol {

// Exact rational arithmetic for step durations and net coupling
// coefficients. Arbitrary precision, so long schedules and simplex pivots
// never overflow; always stored in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& r);

// Canonical rendering: "p" when the denominator is 1, otherwise "p/q" with
// q > 1 and the sign on the numerator.
std::string format_rational(const Rational& r);

// Inverse of format_rational. Accepts an optional leading '-', then digits,
// then optionally "/digits" with a nonzero denominator. Anything else
// throws std::invalid_argument.
Rational parse_rational(const std::string& text);

}  // namespace qdmol
