#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace resonance {

using Rational = boost::multiprecision::cpp_rational;

// Parses "3", "-0.25", "1.5e-3" or "7/12" exactly. Throws ConfigError.
Rational parse_rational(std::string_view text);

// Exact value of the shortest decimal string that round-trips to `value`,
// so 0.1 becomes 1/10 rather than the binary expansion of 0.1.
Rational rational_from_double(double value);

double to_double(const Rational& value);

// "3/8", "-1/6", "2"
std::string to_fraction_string(const Rational& value);

// Shortest round-trip decimal for a double ("0.1", "1e-05").
std::string shortest_decimal(double value);

// 17 significant digits, '.' separator, locale independent.
std::string format_double(double value);

}  // namespace resonance
