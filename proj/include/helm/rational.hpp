#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace helm {

// Exact rational scalar. All symbolic coefficients, exponential rates and
// trigonometric frequencies are rationals; doubles appear only at evaluation
// time. cpp_rational keeps the fraction in lowest terms with a positive
// denominator, which is what canonical-form comparison relies on.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return static_cast<double>(r); }

Rational rat_pow(const Rational& base, unsigned exp);

// Parses "7", "-3/4" or "0.25" (decimals convert exactly to num/10^k).
std::optional<Rational> parse_rational(std::string_view text);

// Renders in the same syntax parse_rational accepts: "7", "-3/4".
std::string to_string(const Rational& r);

} // namespace helm
