#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace ctx {

/// Arbitrary-precision rational; always reduced with a positive denominator.
using ExactRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// "p/q" form, also for integers ("1/1").
std::string to_fraction_string(const ExactRational& value);

/// Accepts "p/q", integers and decimal literals ("0.25", "-1.5e-3"); exact.
ExactRational parse_rational(std::string_view text);

/// Exact value of the shortest decimal that round-trips to `value`.
ExactRational rational_from_double(double value);

double to_double(const ExactRational& value);

}  // namespace ctx
