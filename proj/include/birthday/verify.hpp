#pragma once

/* Self-verification: plays the formula engine against independent routes.
 *
 *  - power identity: the bucket partition sum must reproduce n^q.
 *  - oracle equivalence: every count must match exhaustive enumeration.
 *  - closed-form agreement: the s = 2 / s = 3 fast paths must match the
 *    general restricted sums.
 *  - divisibility: the two factorial divisibility facts behind the exact
 *    divisions must hold for every partition in range.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "birthday/counting.hpp"
#include "birthday/oracle.hpp"
#include "birthday/partition.hpp"

namespace birthday {

struct VerifyCheck {
  std::string identity;
  bool pass = true;
  std::uint64_t cases = 0;
  std::string detail;  // first failing inputs, empty when pass
};

/* Compares every statistic of one brute-force report against the counting
 * module: totals, collision totals under both conventions, no-collision
 * counts, at-least-r counts, and the strong birthday count. Returns a
 * description of the first mismatch, or nothing.
 */
inline std::optional<std::string> compare_counts_to_oracle(
    std::uint64_t n, unsigned q, const std::vector<unsigned>& s_values,
    std::uint64_t cap, const SumOptions& opts = {}) {
  const OracleReport oracle = brute_force(n, q, cap);
  const auto at = [&](unsigned s) { return "n=" + std::to_string(n) + " q=" + std::to_string(q) +
                                           (s ? " s=" + std::to_string(s) : ""); };
  if (total_arrangements(n, q, ArrangementKind::Tubes, opts) !=
      oracle.total_tube_arrangements)
    return "T(n,q) vs oracle at " + at(0);
  if (total_arrangements(n, q, ArrangementKind::Buckets, opts) !=
      oracle.total_bucket_arrangements)
    return "B(n,q) vs oracle at " + at(0);
  PartitionConstraints no_singleton;
  no_singleton.no_singleton = true;
  if (count_constrained(n, q, no_singleton, ArrangementKind::Buckets, opts) !=
      oracle.strong_birthday_count)
    return "strong birthday count vs oracle at " + at(0);
  if (count_constrained(n, q, no_singleton, ArrangementKind::Tubes, opts) !=
      oracle.tube_strong_birthday_count)
    return "tube strong birthday count vs oracle at " + at(0);
  for (unsigned s : s_values) {
    if (s < 2 || s > q) continue;
    const OracleSTable table = oracle.for_s(s);
    if (total_collisions(n, q, s, ArrangementKind::Buckets,
                         CollisionConvention::Binomial, opts) != table.collisions_binomial)
      return "C_B binomial vs oracle at " + at(s);
    if (total_collisions(n, q, s, ArrangementKind::Buckets,
                         CollisionConvention::Window, opts) != table.collisions_window)
      return "C_B window vs oracle at " + at(s);
    if (total_collisions(n, q, s, ArrangementKind::Tubes,
                         CollisionConvention::Binomial, opts) != table.tube_collisions_binomial)
      return "C_T binomial vs oracle at " + at(s);
    if (total_collisions(n, q, s, ArrangementKind::Tubes,
                         CollisionConvention::Window, opts) != table.tube_collisions_window)
      return "C_T window vs oracle at " + at(s);
    if (count_no_collision(n, q, s, ArrangementKind::Buckets, opts) != table.none_count)
      return "bucket no-collision count vs oracle at " + at(s);
    if (count_no_collision(n, q, s, ArrangementKind::Tubes, opts) != table.tube_none_count)
      return "tube no-collision count vs oracle at " + at(s);
    for (unsigned r = 1; r <= 3; ++r) {
      PartitionConstraints constraint;
      constraint.at_least_at = {{s, r}};
      if (count_constrained(n, q, constraint, ArrangementKind::Buckets, opts) !=
          table.at_least_r[r - 1])
        return "bucket at-least-r count vs oracle at " + at(s) + " r=" + std::to_string(r);
      if (count_constrained(n, q, constraint, ArrangementKind::Tubes, opts) !=
          table.tube_at_least_r[r - 1])
        return "tube at-least-r count vs oracle at " + at(s) + " r=" + std::to_string(r);
    }
  }
  return std::nullopt;
}

inline std::vector<VerifyCheck> run_identity_suite(std::uint64_t max_n, unsigned max_q,
                                                   std::uint64_t cap = 1'000'000,
                                                   const SumOptions& opts = {}) {
  std::vector<VerifyCheck> checks;

  {
    VerifyCheck check{"power-identity"};
    for (std::uint64_t n = 0; n <= max_n && check.pass; ++n)
      for (unsigned q = 0; q <= max_q; ++q) {
        ++check.cases;
        if (total_arrangements(n, q, ArrangementKind::Buckets, opts) !=
            integer_power(n, q)) {
          check.pass = false;
          check.detail = "B(n,q) != n^q at n=" + std::to_string(n) + " q=" + std::to_string(q);
          break;
        }
      }
    checks.push_back(std::move(check));
  }

  {
    VerifyCheck check{"oracle-equivalence"};
    for (std::uint64_t n = 0; n <= max_n && check.pass; ++n) {
      for (unsigned q = 0; q <= max_q; ++q) {
        long double size = 1.0L;
        for (unsigned i = 0; i < q; ++i) size *= static_cast<long double>(n);
        if (size > static_cast<long double>(cap)) break;
        ++check.cases;
        std::vector<unsigned> s_values;
        for (unsigned s = 2; s <= q; ++s) s_values.push_back(s);
        if (auto mismatch = compare_counts_to_oracle(n, q, s_values, cap, opts)) {
          check.pass = false;
          check.detail = *mismatch;
          break;
        }
      }
    }
    checks.push_back(std::move(check));
  }

  {
    VerifyCheck check{"closed-form-agreement"};
    SumOptions general = opts;
    general.force_general_sum = true;
    for (std::uint64_t n = 0; n <= max_n && check.pass; ++n)
      for (unsigned q = 0; q <= max_q; ++q)
        for (unsigned s : {2u, 3u}) {
          ++check.cases;
          for (ArrangementKind kind : {ArrangementKind::Tubes, ArrangementKind::Buckets}) {
            if (count_no_collision(n, q, s, kind, opts) !=
                count_no_collision(n, q, s, kind, general)) {
              check.pass = false;
              check.detail = "closed form != general sum at n=" + std::to_string(n) +
                             " q=" + std::to_string(q) + " s=" + std::to_string(s);
              break;
            }
          }
          if (!check.pass) break;
        }
    checks.push_back(std::move(check));
  }

  {
    VerifyCheck check{"factorial-divisibility"};
    for (unsigned q = 0; q <= max_q && check.pass; ++q)
      for_each_partition(q, {}, [&](Parts p) {
        ++check.cases;
        Partition partition;
        partition.parts.assign(p.begin(), p.end());
        const auto [levels, parts_fact] = verify_factorial_divisibility(partition);
        if (!levels || !parts_fact) {
          check.pass = false;
          check.detail = "divisibility fails for a partition of q=" + std::to_string(q);
        }
      });
    checks.push_back(std::move(check));
  }

  return checks;
}

}  // namespace birthday
