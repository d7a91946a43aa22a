#pragma once

/* Exact probabilities, expectations, and threshold searches under the
 * uniform model: all n^q assignments of balls to buckets equally likely.
 * Tube orderings carry no probability weight, so every question here is a
 * bucket question.
 *
 * Threshold searches scan q upward with exact rational comparisons; the
 * scan asserts monotonicity at every step rather than assuming it.
 */

#include <cstdint>
#include <stdexcept>

#include "birthday/counting.hpp"
#include "birthday/exact.hpp"

namespace birthday {

struct BirthdayQuery {
  std::uint64_t n = 1;  // days in the year / bucket count, >= 1
  unsigned q = 0;       // group size / ball count
  unsigned s = 2;       // collision order, >= 2
  CollisionConvention convention = CollisionConvention::Binomial;

  void validate() const {
    if (n < 1) throw std::invalid_argument("BirthdayQuery: n must be >= 1");
    if (s < 2) throw std::invalid_argument("BirthdayQuery: s must be >= 2");
  }
};

// P(at least one s-collision) = 1 - (arrangements with none) / n^q.
inline ExactRatio probability_collision(const BirthdayQuery& query,
                                        const SumOptions& opts = {},
                                        EngineStats* stats = nullptr) {
  query.validate();
  const BigCount none = count_no_collision(query.n, query.q, query.s,
                                           ArrangementKind::Buckets, opts, stats);
  const BigCount all = integer_power(query.n, query.q);
  return make_ratio(all - none, all);
}

// E[number of s-collisions] = C_B(n, q, s) / n^q, under either convention.
inline ExactRatio expected_collisions(const BirthdayQuery& query,
                                      const SumOptions& opts = {},
                                      EngineStats* stats = nullptr) {
  query.validate();
  const BigCount collisions =
      total_collisions(query.n, query.q, query.s, ArrangementKind::Buckets,
                       query.convention, opts, stats);
  return make_ratio(collisions, integer_power(query.n, query.q));
}

// P(no bucket holds exactly one ball): the partition condition is
// lambda_1 = lambda_2.
inline ExactRatio strong_birthday_probability(std::uint64_t n, unsigned q,
                                              const SumOptions& opts = {},
                                              EngineStats* stats = nullptr) {
  if (n < 1) throw std::invalid_argument("strong_birthday_probability: n must be >= 1");
  PartitionConstraints no_singleton;
  no_singleton.no_singleton = true;
  const BigCount count =
      count_constrained(n, q, no_singleton, ArrangementKind::Buckets, opts, stats);
  return make_ratio(count, integer_power(n, q));
}

/* Smallest group size q with P(s-collision) >= threshold. Linear scan from
 * q = s (probability is 0 below); by pigeonhole the probability is exactly 1
 * at q = n(s-1) + 1, so the scan always terminates there at the latest.
 */
inline unsigned min_group_for_probability(std::uint64_t n, unsigned s,
                                          const ExactRatio& threshold,
                                          const SumOptions& opts = {}) {
  if (n < 1) throw std::invalid_argument("min_group_for_probability: n must be >= 1");
  if (s < 2) throw std::invalid_argument("min_group_for_probability: s must be >= 2");
  if (threshold <= 0 || threshold > 1)
    throw std::invalid_argument("min_group_for_probability: threshold must be in (0, 1]");
  ExactRatio previous = 0;
  for (unsigned q = s;; ++q) {
    const ExactRatio p = probability_collision({n, q, s}, opts);
    if (p < previous)
      throw std::logic_error("min_group_for_probability: probability decreased in q");
    if (p >= threshold) return q;
    previous = p;
  }
}

// Smallest q with E[number of s-collisions] >= target. The expectation
// strictly increases with q once collisions are possible and is unbounded.
inline unsigned min_group_for_expectation(std::uint64_t n, unsigned s,
                                          const ExactRatio& target,
                                          CollisionConvention conv,
                                          const SumOptions& opts = {}) {
  if (n < 1) throw std::invalid_argument("min_group_for_expectation: n must be >= 1");
  if (s < 2) throw std::invalid_argument("min_group_for_expectation: s must be >= 2");
  if (target <= 0)
    throw std::invalid_argument("min_group_for_expectation: target must be positive");
  ExactRatio previous = 0;
  for (unsigned q = s;; ++q) {
    const ExactRatio e = expected_collisions({n, q, s, conv}, opts);
    if (e < previous)
      throw std::logic_error("min_group_for_expectation: expectation decreased in q");
    if (e >= target) return q;
    previous = e;
  }
}

}  // namespace birthday
