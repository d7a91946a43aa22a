#include <catch_amalgamated.hpp>

#include "birthday/analysis.hpp"

using namespace birthday;

TEST_CASE("classic birthday probability at n = 365") {
  const ExactRatio p23 = probability_collision({365, 23, 2});
  CHECK(render_decimal(p23, 6) == "0.507297");
  CHECK(p23 >= make_ratio(1, 2));
  const ExactRatio p22 = probability_collision({365, 22, 2});
  CHECK(p22 < make_ratio(1, 2));

  // Independent route: P(no pair) = prod_{i=0}^{q-1} (1 - i/365).
  for (unsigned q : {0u, 1u, 5u, 22u, 23u, 40u}) {
    ExactRatio no_pair = 1;
    for (unsigned i = 0; i < q; ++i) no_pair *= make_ratio(365 - i, 365);
    CHECK(probability_collision({365, q, 2}) == 1 - no_pair);
  }
}

TEST_CASE("probability edge cases") {
  for (std::uint64_t n : {1ull, 2ull, 365ull}) {
    CHECK(probability_collision({n, 0, 2}) == 0);
    CHECK(probability_collision({n, 0, 5}) == 0);
  }
  CHECK(probability_collision({1, 2, 2}) == 1);
  CHECK(probability_collision({1, 1, 2}) == 0);
  CHECK_THROWS_AS(probability_collision({0, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(probability_collision({5, 2, 1}), std::invalid_argument);
}

TEST_CASE("probability is monotone in q and pinned at the pigeonhole bound") {
  for (std::uint64_t n = 1; n <= 5; ++n)
    for (unsigned s : {2u, 3u}) {
      ExactRatio previous = 0;
      for (unsigned q = 0; q <= 10; ++q) {
        const ExactRatio p = probability_collision({n, q, s});
        CHECK(p >= previous);
        CHECK(p >= 0);
        CHECK(p <= 1);
        previous = p;
      }
    }
  for (std::uint64_t n = 1; n <= 4; ++n)
    for (unsigned s : {2u, 3u}) {
      const unsigned pigeonhole = static_cast<unsigned>(n * (s - 1) + 1);
      CHECK(probability_collision({n, pigeonhole, s}) == 1);
      CHECK(probability_collision({n, pigeonhole - 1, s}) < 1);
    }
}

TEST_CASE("expected collisions at n = 365") {
  const BirthdayQuery q28{365, 28, 2, CollisionConvention::Binomial};
  const BirthdayQuery q27{365, 27, 2, CollisionConvention::Binomial};
  CHECK(expected_collisions(q28) == make_ratio(378, 365));
  CHECK(expected_collisions(q27) == make_ratio(351, 365));
  CHECK(expected_collisions(q28) >= 1);
  CHECK(expected_collisions(q27) < 1);
}

TEST_CASE("expected collisions, small cases and the pairwise identity") {
  CHECK(expected_collisions({2, 2, 2, CollisionConvention::Binomial}) == make_ratio(1, 2));
  for (std::uint64_t n : {1ull, 2ull, 9ull})
    for (unsigned s : {2u, 3u, 4u})
      for (unsigned q = 0; q < s; ++q)
        CHECK(expected_collisions({n, q, s}) == 0);
  for (std::uint64_t n = 1; n <= 6; ++n)
    for (unsigned q = 0; q <= 9; ++q)
      CHECK(expected_collisions({n, q, 2, CollisionConvention::Binomial}) ==
            make_ratio(binomial(q, 2), BigCount(n)));
}

TEST_CASE("minimum group size for a probability threshold") {
  CHECK(min_group_for_probability(365, 2, make_ratio(1, 2)) == 23);
  CHECK(min_group_for_probability(1, 2, make_ratio(1, 2)) == 2);
  // Any positive threshold below the first reachable probability returns s.
  for (std::uint64_t n : {1ull, 4ull, 19ull})
    for (unsigned s : {2u, 3u})
      CHECK(min_group_for_probability(n, s, make_ratio(1, 1000000000)) == s);
  CHECK(min_group_for_probability(10, 2, ExactRatio(1)) == 11);  // certainty needs n+1
  CHECK_THROWS_AS(min_group_for_probability(5, 2, ExactRatio(0)), std::invalid_argument);
  CHECK_THROWS_AS(min_group_for_probability(5, 2, ExactRatio(2)), std::invalid_argument);
}

TEST_CASE("minimum group size for an expectation target") {
  CHECK(min_group_for_expectation(365, 2, ExactRatio(1), CollisionConvention::Binomial) == 28);
  CHECK(min_group_for_expectation(1, 2, ExactRatio(1), CollisionConvention::Binomial) == 2);
  // E = C(q,2)/n under the pairwise identity: need C(q,2) >= 4 at n = 4.
  CHECK(min_group_for_expectation(4, 2, ExactRatio(1), CollisionConvention::Binomial) == 4);
  CHECK_THROWS_AS(min_group_for_expectation(5, 2, ExactRatio(0), CollisionConvention::Binomial),
                  std::invalid_argument);
}

TEST_CASE("strong birthday probability") {
  CHECK(strong_birthday_probability(2, 2) == make_ratio(1, 2));
  for (std::uint64_t n : {1ull, 2ull, 30ull}) {
    CHECK(strong_birthday_probability(n, 0) == 1);
    CHECK(strong_birthday_probability(n, 1) == 0);
  }
  // 3 balls in 2 buckets: 3|0 and 0|3 avoid singletons.
  CHECK(strong_birthday_probability(2, 3) == make_ratio(2, 8));
  ExactRatio p = strong_birthday_probability(4, 9);
  CHECK(p >= 0);
  CHECK(p <= 1);
}

TEST_CASE("analysis values agree between thread counts") {
  SumOptions four;
  four.threads = 4;
  CHECK(expected_collisions({30, 14, 3, CollisionConvention::Window}) ==
        expected_collisions({30, 14, 3, CollisionConvention::Window}, four));
  CHECK(strong_birthday_probability(6, 16) == strong_birthday_probability(6, 16, four));
}
