#pragma once

/* Integer partitions of q, enumerated in reverse-lexicographic order on the
 * parts ({q} first when admissible, all-ones last), under the constraint
 * families the counting sums range over.
 *
 * The part-size cap (max_part) and length cap (max_len) prune the search
 * during generation; the remaining constraints (min_len, at_least_at,
 * no_singleton) are cheap per-item filters.
 *
 * A partition lambda is stored as its non-increasing parts vector; we write
 * lambda_i for the i-th part (1-based), with lambda_i = 0 beyond the end.
 * For an occupancy profile x, lambda_i counts the containers holding at
 * least i balls.
 */

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "birthday/exact.hpp"

namespace birthday {

using Parts = std::span<const unsigned>;

// lambda_i with the convention lambda_i = 0 for i > k. `i` is 1-based.
inline unsigned part_at(Parts parts, std::size_t i) {
  return (i >= 1 && i <= parts.size()) ? parts[i - 1] : 0u;
}

struct Partition {
  std::vector<unsigned> parts;  // non-increasing, every part >= 1

  Partition() = default;
  explicit Partition(std::vector<unsigned> p) : parts(std::move(p)) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i] == 0) throw std::invalid_argument("Partition: zero part");
      if (i > 0 && parts[i] > parts[i - 1])
        throw std::invalid_argument("Partition: parts must be non-increasing");
    }
  }

  unsigned sum() const {
    return std::accumulate(parts.begin(), parts.end(), 0u);
  }
  std::size_t size() const { return parts.size(); }
  unsigned at(std::size_t i) const { return part_at(parts, i); }
  bool operator==(const Partition& o) const = default;
};

struct PartitionConstraints {
  std::optional<unsigned> max_part;  // lambda_1 <= max_part
  std::optional<unsigned> min_len;   // |lambda| >= min_len
  std::optional<unsigned> max_len;   // |lambda| <= max_len
  // (s, r): lambda_s >= r, with lambda_s = 0 when |lambda| < s. s, r >= 1.
  std::optional<std::pair<unsigned, unsigned>> at_least_at;
  bool no_singleton = false;  // lambda_1 == lambda_2 (0 == 0 when empty)

  void validate() const {
    if (at_least_at && (at_least_at->first < 1 || at_least_at->second < 1))
      throw std::invalid_argument("PartitionConstraints: at_least_at needs s >= 1, r >= 1");
  }

  // Full membership predicate, independent of how a partition was produced.
  bool admits(Parts parts) const {
    if (max_part && part_at(parts, 1) > *max_part) return false;
    if (min_len && parts.size() < *min_len) return false;
    if (max_len && parts.size() > *max_len) return false;
    if (at_least_at && part_at(parts, at_least_at->first) < at_least_at->second)
      return false;
    if (no_singleton && part_at(parts, 1) != part_at(parts, 2)) return false;
    return true;
  }
};

/* Streaming enumerator.
 *
 *   PartitionEnumerator it(q, constraints);
 *   while (it.next()) use(it.parts());
 *
 * Successor rule (reverse-lexicographic, descending): find the rightmost
 * position whose part can be lowered by one such that the suffix sum still
 * fits in the remaining length budget at the lowered cap, lower it, and
 * refill the tail greedily (largest parts first). Greedy refill is exactly
 * the reverse-lex-maximal tail, so each step lands on the immediate
 * successor and the cap/length constraints never generate dead states.
 *
 * A fixed first part (used to split the space into disjoint sub-ranges for
 * parallel reductions) freezes position 0 and applies the same rule to the
 * suffix.
 */
class PartitionEnumerator {
 public:
  PartitionEnumerator(unsigned q, PartitionConstraints constraints)
      : PartitionEnumerator(q, std::move(constraints), std::nullopt) {}

  PartitionEnumerator(unsigned q, PartitionConstraints constraints,
                      std::optional<unsigned> fixed_first)
      : q_(q), constraints_(std::move(constraints)) {
    constraints_.validate();
    cap_ = std::min(constraints_.max_part.value_or(q), q);
    // No partition of q > 0 has more than q parts, so q is a safe bound.
    len_cap_ = std::min<std::uint64_t>(constraints_.max_len.value_or(q), q);
    if (fixed_first) {
      locked_ = 1;
      const unsigned f = *fixed_first;
      if (f < 1 || f > cap_ || f > q || len_cap_ < 1 ||
          std::uint64_t(q) - f > std::uint64_t(f) * (len_cap_ - 1)) {
        done_ = true;
        return;
      }
      current_.push_back(f);
      greedy_fill(q - f, f);
    } else if (q == 0) {
      // The empty partition is the unique partition of 0.
    } else if (cap_ == 0 || std::uint64_t(q) > std::uint64_t(cap_) * len_cap_) {
      done_ = true;
    } else {
      greedy_fill(q, cap_);
    }
  }

  // Advances to the next admissible partition; false once exhausted.
  bool next() {
    while (!done_) {
      if (started_) advance_raw();
      started_ = true;
      if (done_) return false;
      if (constraints_.admits(current_)) return true;
    }
    return false;
  }

  Parts parts() const { return current_; }
  unsigned q() const { return q_; }

 private:
  void greedy_fill(std::uint64_t t, unsigned cap) {
    for (; t >= cap && cap > 0; t -= cap) current_.push_back(cap);
    if (t > 0) current_.push_back(static_cast<unsigned>(t));
  }

  void advance_raw() {
    std::uint64_t suffix_sum = 0;
    for (std::size_t i = current_.size(); i-- > locked_;) {
      suffix_sum += current_[i];
      if (current_[i] == 1) continue;
      const std::uint64_t c = current_[i] - 1;
      const std::uint64_t budget = len_cap_ - (i + 1);  // tail slots after i
      if (suffix_sum - c > c * budget) continue;
      current_.resize(i + 1);
      current_[i] = static_cast<unsigned>(c);
      greedy_fill(suffix_sum - c, static_cast<unsigned>(c));
      return;
    }
    done_ = true;
  }

  unsigned q_;
  PartitionConstraints constraints_;
  unsigned cap_ = 0;
  std::uint64_t len_cap_ = 0;
  std::size_t locked_ = 0;
  bool started_ = false;
  bool done_ = false;
  std::vector<unsigned> current_;
};

template <typename F>
void for_each_partition(unsigned q, const PartitionConstraints& constraints, F&& f) {
  PartitionEnumerator it(q, constraints);
  while (it.next()) f(it.parts());
}

// Materialized enumeration, for listings and tests. Prefer the streaming
// form in reductions.
inline std::vector<Partition> enumerate_partitions(unsigned q,
                                                   const PartitionConstraints& constraints = {}) {
  std::vector<Partition> out;
  for_each_partition(q, constraints, [&](Parts p) {
    Partition item;
    item.parts.assign(p.begin(), p.end());
    out.push_back(std::move(item));
  });
  return out;
}

inline BigCount count_partitions(unsigned q, const PartitionConstraints& constraints = {}) {
  BigCount count = 0;
  for_each_partition(q, constraints, [&](Parts) { ++count; });
  return count;
}

/* Conjugates an occupancy profile: lambda_i = number of entries >= i.
 * Invariant under permutation of x and under appended zeros.
 */
inline Partition occupancy_to_partition(std::vector<std::uint64_t> occupancy) {
  std::sort(occupancy.begin(), occupancy.end(), std::greater<>());
  while (!occupancy.empty() && occupancy.back() == 0) occupancy.pop_back();
  Partition result;
  if (occupancy.empty()) return result;
  const std::uint64_t levels = occupancy.front();
  result.parts.reserve(static_cast<std::size_t>(levels));
  std::size_t count = occupancy.size();
  for (std::uint64_t level = 1; level <= levels; ++level) {
    while (count > 0 && occupancy[count - 1] < level) --count;
    result.parts.push_back(static_cast<unsigned>(count));
  }
  return result;
}

// prod_{i=1..k} i^{lambda_i}; for any occupancy profile mapping to lambda
// this equals prod_j x_j! (the per-container ordering multiplicities).
inline BigCount level_power_product(Parts parts) {
  BigCount result = 1;
  for (std::size_t i = 2; i <= parts.size(); ++i)
    result *= boost::multiprecision::pow(BigCount(i), parts[i - 1]);
  return result;
}

/* Checks the two divisibility facts behind the exactness of every division
 * in the bucket formulas: q! is divisible both by prod i^{lambda_i} and by
 * prod lambda_i!. Computed by direct exact division; exists as a test
 * oracle, so both components must always come back true.
 */
inline std::pair<bool, bool> verify_factorial_divisibility(const Partition& p) {
  const BigCount q_fact = factorial(p.sum());
  BigCount quotient, remainder;
  boost::multiprecision::divide_qr(q_fact, level_power_product(p.parts), quotient, remainder);
  const bool levels_divide = remainder == 0;
  BigCount parts_fact = 1;
  for (unsigned part : p.parts) parts_fact *= factorial(part);
  boost::multiprecision::divide_qr(q_fact, parts_fact, quotient, remainder);
  return {levels_divide, remainder == 0};
}

}  // namespace birthday
