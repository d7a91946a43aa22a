#pragma once

/* Ground-truth generators the formula engine is checked against.
 *
 * brute_force walks every one of the n^q bucket assignments and tallies
 * occupancy statistics straight off the raw assignment, never through the
 * partition formulas. Tube statistics accumulate the per-assignment
 * ordering weight prod_j x_j! (each bucket arrangement stands for that many
 * tube arrangements, all with the same occupancies);
 * count_tube_arrangements_by_insertion goes one step further and enumerates
 * every within-tube ordering explicitly, so the ordering weight itself gets
 * an independent check at tiny scale.
 *
 * monte_carlo draws uniform assignments with SplitMix64. Trial t's
 * generator is seeded with hash(seed + t * GAMMA), so a trial's draws
 * depend only on (seed, t): sharding trials across any number of workers
 * cannot change the estimate.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "birthday/counting.hpp"
#include "birthday/exact.hpp"
#include "birthday/partition.hpp"

namespace birthday {

struct OracleSTable {
  // Bucket arrangements (each assignment counts once).
  BigCount collisions_binomial = 0;
  BigCount collisions_window = 0;
  BigCount none_count = 0;                      // arrangements with zero s-collisions
  std::array<BigCount, 3> at_least_r{0, 0, 0};  // >= r containers with an s-collision
  // Tube arrangements (each assignment weighted by prod x_j!).
  BigCount tube_collisions_binomial = 0;
  BigCount tube_collisions_window = 0;
  BigCount tube_none_count = 0;
  std::array<BigCount, 3> tube_at_least_r{0, 0, 0};
};

struct OracleReport {
  std::uint64_t n = 0;
  unsigned q = 0;
  BigCount total_bucket_arrangements = 0;
  BigCount total_tube_arrangements = 0;
  std::vector<OracleSTable> per_s;  // index 0 holds s = 2
  BigCount strong_birthday_count = 0;
  BigCount tube_strong_birthday_count = 0;

  // Table for a given s; above q no collision can occur, so the table
  // degenerates to "every arrangement is collision-free".
  OracleSTable for_s(unsigned s) const {
    if (s < 2) throw std::invalid_argument("OracleReport::for_s: s must be >= 2");
    if (s - 2 < per_s.size()) return per_s[s - 2];
    OracleSTable empty;
    empty.none_count = total_bucket_arrangements;
    empty.tube_none_count = total_tube_arrangements;
    return empty;
  }
};

namespace detail {

inline constexpr std::uint64_t kBruteForceHardCap = 100'000'000;

// Exhaustion cost and accumulator-width guarantees break past these bounds.
inline void check_brute_force_size(std::uint64_t n, unsigned q, std::uint64_t cap) {
  if (n <= 1) return;  // at most one assignment
  long double size = 1.0L;
  for (unsigned i = 0; i < q && size <= 2.0L * kBruteForceHardCap; ++i) size *= n;
  if (size > static_cast<long double>(cap) ||
      size > static_cast<long double>(kBruteForceHardCap))
    throw std::length_error("brute_force: n^q exceeds the size cap");
}

// Single-assignment closed case: with n <= 1 there is at most one
// assignment, whose occupancy is {q}; q may be large, so this path stays
// in exact arithmetic.
inline OracleReport brute_force_degenerate(std::uint64_t n, unsigned q) {
  OracleReport report;
  report.n = n;
  report.q = q;
  if (n == 0 && q > 0) return report;  // no assignments at all; totals stay 0
  const BigCount& q_fact = factorial(q);
  report.total_bucket_arrangements = 1;
  report.total_tube_arrangements = q_fact;
  report.strong_birthday_count = q == 1 ? 0 : 1;
  report.tube_strong_birthday_count = q == 1 ? 0 : q_fact;
  if (q >= 2) report.per_s.resize(q - 1);
  for (unsigned s = 2; s <= q; ++s) {
    OracleSTable& table = report.per_s[s - 2];
    table.collisions_binomial = binomial(q, static_cast<std::int64_t>(s));
    table.collisions_window = q - s + 1;
    table.at_least_r = {1, 0, 0};
    table.tube_collisions_binomial = table.collisions_binomial * q_fact;
    table.tube_collisions_window = table.collisions_window * q_fact;
    table.tube_at_least_r = {q_fact, 0, 0};
  }
  return report;
}

// u128 accumulator that spills into exact storage well before overflow.
struct SpillingAccumulator {
  unsigned __int128 fast = 0;
  BigCount exact = 0;

  void add(unsigned __int128 value) {
    fast += value;
    if (fast >> 120) {
      exact += BigCount(fast);
      fast = 0;
    }
  }
  BigCount total() const { return exact + BigCount(fast); }
};

}  // namespace detail

/* Iterates every bucket assignment (an odometer over q digits in base n)
 * and aggregates all the report statistics. Refuses when n^q exceeds `cap`.
 */
inline OracleReport brute_force(std::uint64_t n, unsigned q,
                                std::uint64_t cap = 10'000'000) {
  detail::check_brute_force_size(n, q, cap);
  if (n <= 1 || q == 0) return detail::brute_force_degenerate(n, q);

  // n >= 2 under the hard cap implies q <= 26, so per-assignment tube
  // weights fit in 128 bits and the per-assignment collision tallies in 64.
  std::vector<std::uint64_t> small_factorial(q + 1, 1);
  for (unsigned i = 1; i <= q; ++i) small_factorial[i] = small_factorial[i - 1] * i;
  std::vector<std::vector<std::uint64_t>> choose(q + 1, std::vector<std::uint64_t>(q + 1, 0));
  for (unsigned a = 0; a <= q; ++a) {
    choose[a][0] = 1;
    for (unsigned b = 1; b <= a; ++b)
      choose[a][b] = choose[a - 1][b - 1] + (b <= a - 1 ? choose[a - 1][b] : 0);
  }

  const unsigned max_s = q;
  std::vector<std::uint64_t> collisions_binomial(max_s + 1, 0);
  std::vector<std::uint64_t> collisions_window(max_s + 1, 0);
  std::vector<std::uint64_t> collided(max_s + 1, 0);
  std::vector<std::uint64_t> at_least2(max_s + 1, 0);
  std::vector<std::uint64_t> at_least3(max_s + 1, 0);
  std::vector<detail::SpillingAccumulator> tube_binomial(max_s + 1);
  std::vector<detail::SpillingAccumulator> tube_window(max_s + 1);
  std::vector<detail::SpillingAccumulator> tube_collided(max_s + 1);
  std::vector<detail::SpillingAccumulator> tube_at_least2(max_s + 1);
  std::vector<detail::SpillingAccumulator> tube_at_least3(max_s + 1);
  detail::SpillingAccumulator tube_total;
  detail::SpillingAccumulator tube_strong;
  std::uint64_t strong_count = 0;
  std::uint64_t assignments = 0;

  std::vector<std::uint32_t> digits(q, 0);
  std::vector<std::uint32_t> scratch(q);
  std::vector<unsigned> runs;
  runs.reserve(q);
  for (bool more = true; more;) {
    ++assignments;
    scratch.assign(digits.begin(), digits.end());
    std::sort(scratch.begin(), scratch.end());
    runs.clear();
    for (std::size_t i = 0; i < scratch.size();) {
      std::size_t j = i + 1;
      while (j < scratch.size() && scratch[j] == scratch[i]) ++j;
      runs.push_back(static_cast<unsigned>(j - i));
      i = j;
    }
    unsigned max_run = 0;
    bool has_singleton = false;
    unsigned __int128 weight = 1;
    for (unsigned r : runs) {
      max_run = std::max(max_run, r);
      has_singleton |= r == 1;
      weight *= small_factorial[r];
    }
    tube_total.add(weight);
    if (!has_singleton) {
      ++strong_count;
      tube_strong.add(weight);
    }
    for (unsigned s = 2; s <= max_run; ++s) {
      std::uint64_t binom = 0, window = 0, hit = 0;
      for (unsigned r : runs) {
        if (r < s) continue;
        binom += choose[r][s];
        window += r - s + 1;
        ++hit;
      }
      collisions_binomial[s] += binom;
      collisions_window[s] += window;
      ++collided[s];
      tube_binomial[s].add(weight * binom);
      tube_window[s].add(weight * window);
      tube_collided[s].add(weight);
      if (hit >= 2) {
        ++at_least2[s];
        tube_at_least2[s].add(weight);
      }
      if (hit >= 3) {
        ++at_least3[s];
        tube_at_least3[s].add(weight);
      }
    }

    more = false;
    for (unsigned pos = 0; pos < q; ++pos) {
      if (++digits[pos] < n) {
        more = true;
        break;
      }
      digits[pos] = 0;
    }
  }

  OracleReport report;
  report.n = n;
  report.q = q;
  report.total_bucket_arrangements = assignments;
  report.total_tube_arrangements = tube_total.total();
  report.strong_birthday_count = strong_count;
  report.tube_strong_birthday_count = tube_strong.total();
  if (q >= 2) report.per_s.resize(q - 1);
  for (unsigned s = 2; s <= q; ++s) {
    OracleSTable& table = report.per_s[s - 2];
    table.collisions_binomial = collisions_binomial[s];
    table.collisions_window = collisions_window[s];
    table.none_count = BigCount(assignments - collided[s]);
    table.at_least_r = {BigCount(collided[s]), BigCount(at_least2[s]),
                        BigCount(at_least3[s])};
    table.tube_collisions_binomial = tube_binomial[s].total();
    table.tube_collisions_window = tube_window[s].total();
    table.tube_none_count = report.total_tube_arrangements - tube_collided[s].total();
    table.tube_at_least_r = {tube_collided[s].total(), tube_at_least2[s].total(),
                             tube_at_least3[s].total()};
  }
  return report;
}

/* Counts tube arrangements by explicit enumeration: every bucket assignment
 * crossed with every combination of within-tube orderings, one increment
 * per ordered configuration. Independent of both the partition formulas and
 * the ordering-multiplicity identity, hence the much smaller feasibility
 * bound n^q * q! <= cap.
 */
inline BigCount count_tube_arrangements_by_insertion(std::uint64_t n, unsigned q,
                                                     std::uint64_t cap = 1'000'000) {
  long double size = 1.0L;
  for (unsigned i = 0; i < q; ++i) size *= n;
  for (unsigned i = 2; i <= q; ++i) size *= i;
  if (size > static_cast<long double>(cap))
    throw std::length_error("tube insertion oracle: n^q * q! exceeds the size cap");
  if (n == 0) return q == 0 ? 1 : 0;

  std::vector<std::uint64_t> small_factorial(q + 1, 1);
  for (unsigned i = 1; i <= q; ++i) small_factorial[i] = small_factorial[i - 1] * i;

  BigCount count = 0;
  std::vector<std::uint32_t> digits(q, 0);
  std::vector<std::uint32_t> occupancy(static_cast<std::size_t>(n), 0);
  for (bool more = true; more;) {
    std::fill(occupancy.begin(), occupancy.end(), 0);
    for (std::uint32_t d : digits) ++occupancy[d];
    // Odometer over per-tube permutation indices; each state is one
    // distinct ordered arrangement.
    std::vector<std::uint64_t> radix;
    for (std::uint32_t x : occupancy)
      if (x >= 2) radix.push_back(small_factorial[x]);
    std::vector<std::uint64_t> perm_index(radix.size(), 0);
    for (bool more_perms = true; more_perms;) {
      ++count;
      more_perms = false;
      for (std::size_t i = 0; i < radix.size(); ++i) {
        if (++perm_index[i] < radix[i]) {
          more_perms = true;
          break;
        }
        perm_index[i] = 0;
      }
    }
    more = false;
    for (unsigned pos = 0; pos < q; ++pos) {
      if (++digits[pos] < n) {
        more = true;
        break;
      }
      digits[pos] = 0;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct MonteCarloStatistic {
  enum class Kind {
    CollisionProbability,       // indicator of >= 1 s-collision
    CollisionCount,             // number of s-collisions (chosen convention)
    StrongBirthdayProbability,  // indicator that no bucket holds exactly one ball
  };
  Kind kind = Kind::CollisionProbability;
  unsigned s = 2;
  CollisionConvention convention = CollisionConvention::Binomial;

  std::string descriptor() const {
    switch (kind) {
      case Kind::CollisionProbability:
        return "P[>=1 " + std::to_string(s) + "-collision]";
      case Kind::CollisionCount:
        return "E[" + std::to_string(s) + "-collisions, " +
               (convention == CollisionConvention::Binomial ? "binomial" : "window") + "]";
      case Kind::StrongBirthdayProbability:
        return "P[strong birthday]";
    }
    return "?";
  }
};

struct MonteCarloEstimate {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double point_estimate = 0.0;
  double standard_error = 0.0;
  std::string statistic;
};

namespace detail {

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += kSplitMixGamma);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// The split function: a fresh SplitMix64 state for trial t, derived only
// from (seed, t).
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t state = seed + trial * kSplitMixGamma;
  return splitmix64_next(state);
}

// Unbiased draw in [0, bound) by rejection.
inline std::uint64_t bounded_draw(std::uint64_t& state, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = splitmix64_next(state);
    if (x >= threshold) return x % bound;
  }
}

}  // namespace detail

/* Mean and standard error of `statistic` over `trials` independent uniform
 * assignments of q balls into n buckets. Identical (seed, trials, statistic)
 * give bit-identical results at any worker count: per-trial values are
 * integers accumulated exactly, and each trial's randomness is a pure
 * function of (seed, trial index).
 */
inline MonteCarloEstimate monte_carlo(std::uint64_t n, unsigned q,
                                      const MonteCarloStatistic& statistic,
                                      std::uint64_t trials, std::uint64_t seed,
                                      unsigned threads = 1) {
  if (n < 1) throw std::invalid_argument("monte_carlo: n must be >= 1");
  if (n > 100'000'000) throw std::invalid_argument("monte_carlo: n beyond supported range");
  if (trials < 1) throw std::invalid_argument("monte_carlo: trials must be >= 1");
  if (statistic.kind != MonteCarloStatistic::Kind::StrongBirthdayProbability) {
    if (statistic.s < 2) throw std::invalid_argument("monte_carlo: s must be >= 2");
    if (statistic.kind == MonteCarloStatistic::Kind::CollisionCount &&
        binomial(q, static_cast<std::int64_t>(statistic.s)) > BigCount(1u << 31))
      throw std::invalid_argument("monte_carlo: per-trial count too large to tally");
  }

  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                                   std::min<std::uint64_t>(trials, 64))));
  std::vector<unsigned __int128> sums(workers, 0);
  std::vector<unsigned __int128> square_sums(workers, 0);

  auto run_range = [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(n), 0);
    std::vector<std::uint32_t> touched;
    touched.reserve(q);
    unsigned __int128 sum = 0, square_sum = 0;
    for (std::uint64_t t = lo; t < hi; ++t) {
      std::uint64_t state = detail::trial_seed(seed, t);
      touched.clear();
      for (unsigned b = 0; b < q; ++b) {
        const auto bucket = static_cast<std::uint32_t>(detail::bounded_draw(state, n));
        if (counts[bucket]++ == 0) touched.push_back(bucket);
      }
      std::uint64_t value = 0;
      switch (statistic.kind) {
        case MonteCarloStatistic::Kind::CollisionProbability:
          for (std::uint32_t b : touched)
            if (counts[b] >= statistic.s) {
              value = 1;
              break;
            }
          break;
        case MonteCarloStatistic::Kind::CollisionCount:
          for (std::uint32_t b : touched) {
            const std::uint32_t r = counts[b];
            if (r < statistic.s) continue;
            if (statistic.convention == CollisionConvention::Window) {
              value += r - statistic.s + 1;
            } else {
              // C(r, s) stepwise; the guard above keeps this in 64 bits.
              std::uint64_t c = 1;
              for (std::uint32_t i = 1; i <= statistic.s; ++i) {
                c *= r - statistic.s + i;
                c /= i;
              }
              value += c;
            }
          }
          break;
        case MonteCarloStatistic::Kind::StrongBirthdayProbability: {
          value = 1;
          for (std::uint32_t b : touched)
            if (counts[b] == 1) {
              value = 0;
              break;
            }
          break;
        }
      }
      sum += value;
      square_sum += static_cast<unsigned __int128>(value) * value;
      for (std::uint32_t b : touched) counts[b] = 0;
    }
    sums[w] = sum;
    square_sums[w] = square_sum;
  };

  if (workers == 1) {
    run_range(0, 0, trials);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = trials / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = w * chunk;
      const std::uint64_t hi = w + 1 == workers ? trials : lo + chunk;
      pool.emplace_back(run_range, w, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  unsigned __int128 sum = 0, square_sum = 0;
  for (unsigned w = 0; w < workers; ++w) {
    sum += sums[w];
    square_sum += square_sums[w];
  }

  MonteCarloEstimate estimate;
  estimate.trials = trials;
  estimate.seed = seed;
  estimate.statistic = statistic.descriptor();
  const double N = static_cast<double>(trials);
  const double mean = static_cast<double>(sum) / N;
  estimate.point_estimate = mean;
  if (trials >= 2) {
    const double variance =
        (static_cast<double>(square_sum) - N * mean * mean) / (N - 1.0);
    estimate.standard_error = std::sqrt(std::max(0.0, variance) / N);
  }
  return estimate;
}

}  // namespace birthday
