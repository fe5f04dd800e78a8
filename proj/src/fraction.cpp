#include "ars/fraction.hpp"

#include "ars/error.hpp"

#include <charconv>
#include <cstdio>

namespace ars {

std::string to_string(const Fraction& f) {
  return std::to_string(f.numerator()) + "/" + std::to_string(f.denominator());
}

namespace {

std::int64_t parse_int(std::string_view text) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::BadRequest, "not an integer: " + std::string(text));
  }
  return v;
}

} // namespace

Fraction parse_fraction(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto den = parse_int(text.substr(slash + 1));
    if (den == 0) {
      throw Error(ErrorCode::BadRequest, "zero denominator");
    }
    return Fraction(parse_int(text.substr(0, slash)), den);
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto digits = text.substr(dot + 1);
    if (digits.size() > 15) {
      throw Error(ErrorCode::BadRequest, "too many decimal digits: " + std::string(text));
    }
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      scale *= 10;
    }
    auto whole_text = text.substr(0, dot);
    const bool negative = !whole_text.empty() && whole_text.front() == '-';
    if (negative) {
      whole_text.remove_prefix(1);
    }
    const std::int64_t whole = whole_text.empty() ? 0 : parse_int(whole_text);
    const std::int64_t frac = digits.empty() ? 0 : parse_int(digits);
    if (whole < 0 || frac < 0) {
      throw Error(ErrorCode::BadRequest, "malformed decimal: " + std::string(text));
    }
    Fraction f(whole * scale + frac, scale);
    return negative ? -f : f;
  }
  return Fraction(parse_int(text));
}

std::string to_decimal(const Fraction& f, int digits) {
  __int128 scale = 1;
  for (int i = 0; i < digits; ++i) {
    scale *= 10;
  }
  const __int128 scaled = static_cast<__int128>(f.numerator()) * scale;
  const __int128 den = f.denominator();
  __int128 q = scaled / den;
  const __int128 r = scaled % den;
  if (2 * r > den || (2 * r == den && q % 2 == 1)) {
    ++q;
  }
  const auto whole = static_cast<long long>(q / scale);
  const auto frac = static_cast<long long>(q % scale);
  char buf[64];
  if (digits == 0) {
    std::snprintf(buf, sizeof buf, "%lld", whole);
  } else {
    std::snprintf(buf, sizeof buf, "%lld.%0*lld", whole, digits, frac);
  }
  return buf;
}

std::int64_t round_scaled(const Fraction& f, std::int64_t width) {
  const __int128 num = static_cast<__int128>(f.numerator()) * width;
  const __int128 den = f.denominator();
  return static_cast<std::int64_t>((2 * num + den) / (2 * den));
}

} // namespace ars
