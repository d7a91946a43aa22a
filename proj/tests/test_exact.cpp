#include <catch_amalgamated.hpp>

#include <random>

#include "birthday/exact.hpp"

using namespace birthday;

TEST_CASE("factorial small values and bignum range") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(1) == 1);
  CHECK(factorial(5) == 120);
  CHECK(factorial(12) == 479001600);
  // Exceeds 2^61, exercises the unbounded path.
  CHECK(factorial(20) == BigCount("2432902008176640000"));
  CHECK(factorial(30) == BigCount("265252859812191058636308480000000"));
}

TEST_CASE("factorial recurrence") {
  for (unsigned m = 1; m <= 200; ++m) CHECK(factorial(m) == m * factorial(m - 1));
}

TEST_CASE("binomial values and out-of-range convention") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(3, 7) == 0);
  CHECK(binomial(3, -1) == 0);
  CHECK(binomial(0, 0) == 1);
  for (std::uint64_t a : {0ull, 1ull, 7ull, 40ull, 365ull, 1000ull})
    CHECK(binomial(a, 0) == 1);
  // Beyond the cached rows.
  CHECK(binomial(1000, 3) == BigCount("166167000"));
  CHECK(binomial(1000000, 2) == BigCount("499999500000"));
}

TEST_CASE("binomial symmetry and Pascal identity") {
  for (std::uint64_t a = 0; a <= 60; ++a)
    for (std::uint64_t b = 0; b <= a; ++b) {
      CHECK(binomial(a, static_cast<std::int64_t>(b)) ==
            binomial(a, static_cast<std::int64_t>(a - b)));
      if (a >= 1)
        CHECK(binomial(a, static_cast<std::int64_t>(b)) ==
              binomial(a - 1, static_cast<std::int64_t>(b) - 1) +
                  binomial(a - 1, static_cast<std::int64_t>(b)));
    }
}

TEST_CASE("falling factorial") {
  CHECK(falling_factorial(365, 2) == 132860);
  CHECK(falling_factorial(0, 0) == 1);
  CHECK(falling_factorial(17, 0) == 1);
  CHECK(falling_factorial(3, 5) == 0);
  CHECK(falling_factorial(5, 5) == 120);
}

TEST_CASE("falling factorial completes to the full factorial") {
  for (std::uint64_t n = 0; n <= 120; n += 7)
    for (std::uint64_t q = 0; q <= n; q += 5)
      CHECK(falling_factorial(n, q) * factorial(static_cast<unsigned>(n - q)) ==
            factorial(static_cast<unsigned>(n)));
}

TEST_CASE("integer power") {
  CHECK(integer_power(2, 10) == 1024);
  CHECK(integer_power(7, 0) == 1);
  CHECK(integer_power(0, 0) == 1);
  CHECK(integer_power(0, 3) == 0);
  CHECK(integer_power(10, 30) == BigCount("1000000000000000000000000000000"));
}

TEST_CASE("decimal rendering") {
  CHECK(render_decimal(make_ratio(1, 2), 4) == "0.5000");
  CHECK(render_decimal(make_ratio(1, 3), 5) == "0.33333");
  // 132860/133225 = 364/365 = 0.99726027...; half-even keeps the 0.
  CHECK(render_decimal(make_ratio(132860, 133225), 6) == "0.997260");
  CHECK(render_decimal(ExactRatio(24), 6) == "24.000000");
  CHECK(render_decimal(make_ratio(378, 365), 4) == "1.0356");
}

TEST_CASE("decimal rendering rounds half to even") {
  CHECK(render_decimal(make_ratio(1, 8), 2) == "0.12");   // 0.125 -> 0.12
  CHECK(render_decimal(make_ratio(3, 8), 2) == "0.38");   // 0.375 -> 0.38
  CHECK(render_decimal(make_ratio(1, 4), 1) == "0.2");    // 0.25 -> 0.2
  CHECK(render_decimal(make_ratio(3, 4), 1) == "0.8");    // 0.75 -> 0.8
  CHECK(render_decimal(make_ratio(9999995, 10000000), 6) == "1.000000");
  CHECK(render_decimal(make_ratio(9999985, 10000000), 6) == "0.999998");
}

TEST_CASE("ratio parsing") {
  CHECK(parse_ratio("1/2") == make_ratio(1, 2));
  CHECK(parse_ratio("0.5") == make_ratio(1, 2));
  CHECK(parse_ratio(".25") == make_ratio(1, 4));
  CHECK(parse_ratio("3") == ExactRatio(3));
  CHECK(parse_ratio("1.035616") == make_ratio(1035616, 1000000));
  CHECK_THROWS_AS(parse_ratio("x/y"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ratio(""), std::invalid_argument);
}

TEST_CASE("ratio comparisons agree with cross multiplication") {
  std::mt19937 rng(20250810);
  std::uniform_int_distribution<int> dist(0, 400);
  for (int i = 0; i < 2000; ++i) {
    const BigCount a = dist(rng), b = dist(rng) + 1, c = dist(rng), d = dist(rng) + 1;
    const ExactRatio left = make_ratio(a, b), right = make_ratio(c, d);
    CHECK((left < right) == (a * d < c * b));
    CHECK((left == right) == (a * d == c * b));
    CHECK((left > right) == (a * d > c * b));
  }
}

TEST_CASE("ratios normalize to lowest terms") {
  const ExactRatio r = make_ratio(132860, 133225);
  CHECK(boost::multiprecision::numerator(r) == 364);
  CHECK(boost::multiprecision::denominator(r) == 365);
  CHECK_THROWS_AS(make_ratio(1, 0), std::invalid_argument);
}
