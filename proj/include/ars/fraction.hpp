#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace ars {

// Compare against Fraction values rather than int literals: Boost 1.74's mixed
// comparisons recurse forever under C++20 rewritten operators.
using Fraction = boost::rational<std::int64_t>;

/// "n/d" in lowest terms ("0/1" for zero).
std::string to_string(const Fraction& f);

/// Parses "n/d", an integer, or a plain decimal such as "0.125" exactly.
/// Throws Error(BadRequest) on malformed input.
Fraction parse_fraction(std::string_view text);

/// Decimal rendering with `digits` fractional digits, round-half-even.
/// Requires f >= 0.
std::string to_decimal(const Fraction& f, int digits);

/// round(f * width), halves away from zero. Requires f >= 0, width >= 0.
std::int64_t round_scaled(const Fraction& f, std::int64_t width);

} // namespace ars
