#pragma once

/* Partition-sum counting for arrangements of q labeled balls in n containers.
 *
 * Containers come in two flavors: tubes keep the vertical order of their
 * balls, buckets do not. Every count here is a sum over the partitions of q
 * with lambda_1 <= n, where the partition of an arrangement records, at
 * level i, how many containers hold at least i balls. The number of
 * arrangements landing on a given partition (its fiber size) factors into a
 * chain of binomials that picks the containers level by level; tubes carry
 * an extra q! of ball orderings, buckets divide the level multiplicities
 * back out.
 */

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "birthday/exact.hpp"
#include "birthday/partition.hpp"

namespace birthday {

enum class ArrangementKind { Tubes, Buckets };

/* Two published ways to count s-collisions in a container holding r >= s
 * balls: Binomial says it contributes C(r, s), Window says r - s + 1.
 */
enum class CollisionConvention { Binomial, Window };

struct SumOptions {
  unsigned threads = 1;
  bool force_general_sum = false;  // disable closed-form fast paths
};

struct EngineStats {
  std::string path = "general-sum";
  std::uint64_t partitions_visited = 0;
};

namespace detail {

// C(n, lambda_1) * prod_{i>=2} C(lambda_{i-1}, lambda_i): the ways of
// choosing which containers hold at least 1, 2, ... balls. Empty chain = 1.
inline BigCount choose_chain(std::uint64_t n, Parts parts) {
  BigCount chain = binomial(n, static_cast<std::int64_t>(part_at(parts, 1)));
  for (std::size_t i = 2; i <= parts.size() && chain != 0; ++i)
    chain *= binomial(parts[i - 2], static_cast<std::int64_t>(parts[i - 1]));
  return chain;
}

// q! / prod i^{lambda_i}, asserting exactness. The quotient is an integer
// for every partition; a remainder means a bug upstream, never bad input.
inline BigCount ordered_to_unordered(const BigCount& q_fact, Parts parts) {
  BigCount quotient, remainder;
  boost::multiprecision::divide_qr(q_fact, level_power_product(parts), quotient, remainder);
  if (remainder != 0)
    throw std::logic_error("bucket fiber: inexact division by level multiplicities");
  return quotient;
}

inline unsigned first_part_cap(std::uint64_t n, unsigned q,
                               const PartitionConstraints& c) {
  std::uint64_t cap = std::min<std::uint64_t>(n, q);
  if (c.max_part) cap = std::min<std::uint64_t>(cap, *c.max_part);
  return static_cast<unsigned>(cap);
}

/* Associative reduction of `term` over all admissible partitions of q.
 * With more than one worker the space is split into disjoint sub-ranges by
 * first part; each worker drains whole sub-ranges off a shared counter.
 * Exact integer addition commutes, so the total is schedule-independent.
 */
template <typename Term>
BigCount partition_sum(unsigned q, const PartitionConstraints& constraints,
                       const SumOptions& opts, std::uint64_t* visited,
                       Term&& term) {
  const unsigned cap = std::min(constraints.max_part.value_or(q), q);
  unsigned workers = opts.threads == 0 ? 1 : opts.threads;
  workers = std::min<unsigned>(workers, cap);

  BigCount total = 0;
  std::uint64_t seen = 0;
  if (workers <= 1 || q == 0) {
    PartitionEnumerator it(q, constraints);
    while (it.next()) {
      total += term(it.parts());
      ++seen;
    }
  } else {
    // Pre-warm shared caches so workers only read them.
    factorial(q);
    std::atomic<unsigned> next_first{cap};
    std::vector<BigCount> partial(workers, BigCount(0));
    std::vector<std::uint64_t> counts(workers, 0);
    auto drain = [&](unsigned w) {
      for (;;) {
        const unsigned f = next_first.fetch_sub(1, std::memory_order_relaxed);
        if (f == 0 || f > cap) break;
        PartitionEnumerator it(q, constraints, f);
        while (it.next()) {
          partial[w] += term(it.parts());
          ++counts[w];
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(drain, w);
    drain(0);
    for (auto& t : pool) t.join();
    for (unsigned w = 0; w < workers; ++w) {
      total += partial[w];
      seen += counts[w];
    }
  }
  if (visited) *visited += seen;
  return total;
}

}  // namespace detail

// Number of tube arrangements whose occupancy pattern is the given
// partition: q! * C(n, l1) * prod C(l_{i-1}, l_i). Zero once lambda_1 > n.
inline BigCount tube_fiber_size(std::uint64_t n, Parts parts) {
  BigCount chain = detail::choose_chain(n, parts);
  if (chain == 0) return chain;
  unsigned q = 0;
  for (unsigned part : parts) q += part;
  return chain * factorial(q);
}
inline BigCount tube_fiber_size(std::uint64_t n, const Partition& p) {
  return tube_fiber_size(n, Parts(p.parts));
}

// Bucket analogue: the q! orderings collapse by prod i^{lambda_i}.
inline BigCount bucket_fiber_size(std::uint64_t n, Parts parts) {
  BigCount chain = detail::choose_chain(n, parts);
  if (chain == 0) return chain;
  unsigned q = 0;
  for (unsigned part : parts) q += part;
  return chain * detail::ordered_to_unordered(factorial(q), parts);
}
inline BigCount bucket_fiber_size(std::uint64_t n, const Partition& p) {
  return bucket_fiber_size(n, Parts(p.parts));
}

// Orderings of one bucket arrangement's balls into tube columns:
// prod i^{lambda_i} = prod_j x_j!. Satisfies tube fiber = bucket fiber * this.
inline BigCount tube_order_multiplicity(Parts parts) {
  return level_power_product(parts);
}
inline BigCount tube_order_multiplicity(const Partition& p) {
  return level_power_product(p.parts);
}

inline BigCount fiber_size(std::uint64_t n, Parts parts, ArrangementKind kind) {
  return kind == ArrangementKind::Tubes ? tube_fiber_size(n, parts)
                                        : bucket_fiber_size(n, parts);
}

/* s-collisions contributed by every arrangement with this occupancy pattern.
 * A container holding r >= s balls contributes C(r, s) (Binomial) or
 * r - s + 1 (Window); the order inside a tube never changes the count, so
 * the weight depends on the partition alone.
 *
 * Binomial closed form: there are lambda_k containers with exactly k balls
 * and lambda_i - lambda_{i+1} with exactly i, hence
 *   lambda_k * C(k, s) + sum_{i=s}^{k-1} (lambda_i - lambda_{i+1}) * C(i, s).
 * Window telescopes to sum_{i=s}^{k} lambda_i.
 */
inline BigCount collision_weight(Parts parts, unsigned s, CollisionConvention conv) {
  if (s < 2) throw std::invalid_argument("collision_weight: s must be >= 2");
  const std::size_t k = parts.size();
  if (k < s) return 0;
  if (conv == CollisionConvention::Window) {
    BigCount w = 0;
    for (std::size_t i = s; i <= k; ++i) w += parts[i - 1];
    return w;
  }
  BigCount w = parts[k - 1] * binomial(k, static_cast<std::int64_t>(s));
  for (std::size_t i = s; i + 1 <= k; ++i)
    w += BigCount(parts[i - 1] - parts[i]) * binomial(i, static_cast<std::int64_t>(s));
  return w;
}
inline BigCount collision_weight(const Partition& p, unsigned s, CollisionConvention conv) {
  return collision_weight(Parts(p.parts), s, conv);
}

/* T(n, q) or B(n, q): all arrangements, as the partition sum over
 * lambda_1 <= n. For buckets this provably equals n^q; the library computes
 * the sum and lets the verification suite hold it against the power.
 */
inline BigCount total_arrangements(std::uint64_t n, unsigned q, ArrangementKind kind,
                                   const SumOptions& opts = {},
                                   EngineStats* stats = nullptr) {
  PartitionConstraints c;
  c.max_part = detail::first_part_cap(n, q, c);
  std::uint64_t visited = 0;
  BigCount result;
  if (kind == ArrangementKind::Tubes) {
    // q! factors out of every tube fiber.
    result = factorial(q) * detail::partition_sum(q, c, opts, &visited, [&](Parts p) {
               return detail::choose_chain(n, p);
             });
  } else {
    const BigCount& q_fact = factorial(q);
    result = detail::partition_sum(q, c, opts, &visited, [&](Parts p) {
      BigCount chain = detail::choose_chain(n, p);
      return chain == 0 ? chain : BigCount(chain * detail::ordered_to_unordered(q_fact, p));
    });
  }
  if (stats) {
    stats->path = "general-sum";
    stats->partitions_visited = visited;
  }
  return result;
}

// Total number of s-collisions across all arrangements: fiber size times
// collision weight, over partitions with at least s parts.
inline BigCount total_collisions(std::uint64_t n, unsigned q, unsigned s,
                                 ArrangementKind kind, CollisionConvention conv,
                                 const SumOptions& opts = {},
                                 EngineStats* stats = nullptr) {
  if (s < 2) throw std::invalid_argument("total_collisions: s must be >= 2");
  PartitionConstraints c;
  c.max_part = detail::first_part_cap(n, q, c);
  c.min_len = s;
  std::uint64_t visited = 0;
  const BigCount& q_fact = factorial(q);
  BigCount result = detail::partition_sum(q, c, opts, &visited, [&](Parts p) {
    BigCount chain = detail::choose_chain(n, p);
    if (chain != 0) {
      chain *= collision_weight(p, s, conv);
      if (kind == ArrangementKind::Buckets)
        chain *= detail::ordered_to_unordered(q_fact, p);
    }
    return chain;
  });
  if (kind == ArrangementKind::Tubes) result *= q_fact;
  if (stats) {
    stats->path = "general-sum";
    stats->partitions_visited = visited;
  }
  return result;
}

/* Arrangements with zero s-collisions: the sum restricted to partitions
 * with fewer than s parts. s = 2 collapses to the falling factorial
 * n!/(n-q)! for either kind; s = 3 has two-part closed forms
 *   tubes:   q! * sum_r C(n, q-r) * C(q-r, r)
 *   buckets:     sum_r C(n, q-r) * C(q-r, r) * q!/2^r
 * (r = number of doubled containers, 0 <= r <= q/2). Both fast paths are
 * selected automatically; force_general_sum runs the restricted sum instead
 * so the two routes can be played against each other.
 */
inline BigCount count_no_collision(std::uint64_t n, unsigned q, unsigned s,
                                   ArrangementKind kind, const SumOptions& opts = {},
                                   EngineStats* stats = nullptr) {
  if (s < 2) throw std::invalid_argument("count_no_collision: s must be >= 2");
  if (!opts.force_general_sum && s == 2) {
    if (stats) {
      stats->path = "closed-form-s2";
      stats->partitions_visited = 0;
    }
    return falling_factorial(n, q);
  }
  if (!opts.force_general_sum && s == 3) {
    if (stats) {
      stats->path = "closed-form-s3";
      stats->partitions_visited = 0;
    }
    const BigCount& q_fact = factorial(q);
    BigCount sum = 0;
    for (unsigned r = 0; r <= q / 2; ++r) {
      BigCount term = binomial(n, static_cast<std::int64_t>(q - r)) *
                      binomial(q - r, static_cast<std::int64_t>(r));
      if (term == 0) continue;
      if (kind == ArrangementKind::Buckets) {
        BigCount quotient, remainder;
        boost::multiprecision::divide_qr(q_fact, BigCount(BigCount(1) << r), quotient,
                                         remainder);
        if (remainder != 0)
          throw std::logic_error("no-3-collision closed form: inexact q!/2^r");
        term *= quotient;
      } else {
        term *= q_fact;
      }
      sum += term;
    }
    return sum;
  }
  PartitionConstraints c;
  c.max_part = detail::first_part_cap(n, q, c);
  c.max_len = s - 1;
  std::uint64_t visited = 0;
  BigCount result = detail::partition_sum(q, c, opts, &visited, [&](Parts p) {
    return fiber_size(n, p, kind);
  });
  if (stats) {
    stats->path = "general-sum";
    stats->partitions_visited = visited;
  }
  return result;
}

/* Arrangements whose partition satisfies an arbitrary constraint set
 * (lambda_1 <= n always applies on top). Covers the at-least-r-collisions
 * counts (lambda_s >= r) and the strong birthday count (lambda_1 = lambda_2).
 */
inline BigCount count_constrained(std::uint64_t n, unsigned q,
                                  PartitionConstraints constraints, ArrangementKind kind,
                                  const SumOptions& opts = {},
                                  EngineStats* stats = nullptr) {
  constraints.max_part = detail::first_part_cap(n, q, constraints);
  std::uint64_t visited = 0;
  BigCount result = detail::partition_sum(q, constraints, opts, &visited, [&](Parts p) {
    return fiber_size(n, p, kind);
  });
  if (stats) {
    stats->path = "general-sum";
    stats->partitions_visited = visited;
  }
  return result;
}

}  // namespace birthday
