#include "doctest.h"

#include "ars/clock.hpp"
#include "ars/error.hpp"
#include "ars/fraction.hpp"
#include "support/oracle.hpp"

#include <random>

using namespace ars;

TEST_CASE("fraction text round-trips") {
  CHECK(to_string(Fraction(2, 3)) == "2/3");
  CHECK(to_string(Fraction(0)) == "0/1");
  CHECK(parse_fraction("2/3") == Fraction(2, 3));
  CHECK(parse_fraction("4/6") == Fraction(2, 3));
  CHECK(parse_fraction("1") == Fraction(1));
  CHECK(parse_fraction("0.125") == Fraction(1, 8));
  CHECK_THROWS_AS(parse_fraction("1/0"), Error);
  CHECK_THROWS_AS(parse_fraction("abc"), Error);
}

TEST_CASE("six-digit decimals round half to even") {
  CHECK(to_decimal(Fraction(2, 3), 6) == "0.666667");
  CHECK(to_decimal(Fraction(1, 3), 6) == "0.333333");
  CHECK(to_decimal(Fraction(0), 6) == "0.000000");
  CHECK(to_decimal(Fraction(1), 6) == "1.000000");
  // exact ties at the seventh digit
  CHECK(to_decimal(Fraction(1, 2'000'000), 6) == "0.000000");
  CHECK(to_decimal(Fraction(3, 2'000'000), 6) == "0.000002");
  CHECK(to_decimal(Fraction(5, 2'000'000), 6) == "0.000002");
}

TEST_CASE("decimals agree with a long-division oracle") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20000; ++i) {
    const auto d = std::uniform_int_distribution<std::int64_t>(1, 5'000'000)(rng);
    const auto n = std::uniform_int_distribution<std::int64_t>(0, d)(rng);
    REQUIRE(to_decimal(Fraction(n, d), 6) == testing::decimal6(n, d));
  }
}

TEST_CASE("scaled rounding goes half away from zero") {
  CHECK(round_scaled(Fraction(2, 3), 10) == 7);
  CHECK(round_scaled(Fraction(1, 3), 10) == 3);
  CHECK(round_scaled(Fraction(1, 4), 2) == 1);
  CHECK(round_scaled(Fraction(1, 8), 4) == 1);
  CHECK(round_scaled(Fraction(0), 100) == 0);
  CHECK(round_scaled(Fraction(1), 100) == 100);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20000; ++i) {
    const auto d = std::uniform_int_distribution<std::int64_t>(1, 3000)(rng);
    const auto n = std::uniform_int_distribution<std::int64_t>(0, d)(rng);
    const auto w = std::uniform_int_distribution<std::int64_t>(1, 400)(rng);
    REQUIRE(round_scaled(Fraction(n, d), w) == testing::rounded_length(n, d, w));
  }
}

TEST_CASE("instants format and parse as UTC ISO-8601 with milliseconds") {
  const Instant t{Millis{1'700'000'000'123}};
  CHECK(format_iso(t) == "2023-11-14T22:13:20.123Z");
  CHECK(parse_iso("2023-11-14T22:13:20.123Z") == t);
  CHECK(parse_iso("2023-11-14T22:13:20Z") == Instant{Millis{1'700'000'000'000}});
  CHECK(format_iso(Instant{Millis{0}}) == "1970-01-01T00:00:00.000Z");
  CHECK_THROWS_AS(parse_iso("yesterday"), Error);
}
