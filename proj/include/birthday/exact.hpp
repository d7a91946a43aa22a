#pragma once

/* Exact arithmetic layer: unbounded non-negative counts, exact rationals,
 * and the cached combinatorial primitives (factorials, binomials) every
 * counting formula leans on.
 *
 * Storage is boost::multiprecision (cpp_int / cpp_rational); everything on
 * top of it (caches, conventions, rendering) is ours. No floating point
 * anywhere: threshold decisions stay exact.
 */

#include <atomic>
#include <cstdint>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace birthday {

// Non-negative integer of unbounded magnitude. All arithmetic is exact.
using BigCount = boost::multiprecision::cpp_int;

// Exact rational, kept in lowest terms with a positive denominator by the
// backend. Comparisons are exact (cross-multiplication), never floating.
using ExactRatio = boost::multiprecision::cpp_rational;

namespace detail {

/* Grow-only cache: lock-free reads of published entries, mutex-serialized
 * growth. Storage is a fixed array of geometrically sized chunks whose
 * pointers are published atomically, so elements never move and readers
 * never touch mutating bookkeeping. Entry j is fully constructed before the
 * published size advances past it (release/acquire), and make(i) may read
 * any entry below i.
 */
template <typename T>
class GrowingTable {
 public:
  ~GrowingTable() {
    for (auto& chunk : chunks_) delete[] chunk.load(std::memory_order_relaxed);
  }

  // Requires i < published size.
  const T& get(std::size_t i) const {
    const unsigned c = chunk_index(i);
    return chunks_[c].load(std::memory_order_acquire)[i + 1 - (std::size_t(1) << c)];
  }

  template <typename Make>
  const T& ensure(std::size_t i, Make&& make) {
    if (i < published_.load(std::memory_order_acquire)) return get(i);
    std::lock_guard<std::mutex> lock(grow_mutex_);
    while (true) {
      const std::size_t next = published_.load(std::memory_order_relaxed);
      if (next > i) break;
      const unsigned c = chunk_index(next);
      if (chunks_[c].load(std::memory_order_relaxed) == nullptr)
        chunks_[c].store(new T[std::size_t(1) << c], std::memory_order_release);
      chunks_[c].load(std::memory_order_relaxed)[next + 1 - (std::size_t(1) << c)] =
          make(next);
      published_.store(next + 1, std::memory_order_release);
    }
    return get(i);
  }

 private:
  static unsigned chunk_index(std::size_t i) {
    unsigned c = 0;
    for (std::size_t v = (i + 1) >> 1; v != 0; v >>= 1) ++c;
    return c;
  }

  static constexpr unsigned kMaxChunks = 40;
  std::array<std::atomic<T*>, kMaxChunks> chunks_{};
  std::atomic<std::size_t> published_{0};
  std::mutex grow_mutex_;
};

inline BigCount pow10(unsigned digits) {
  BigCount p = 1;
  for (unsigned i = 0; i < digits; ++i) p *= 10;
  return p;
}

}  // namespace detail

// m!, memoized. Repeated calls are amortized constant-time lookups.
inline const BigCount& factorial(unsigned m) {
  static detail::GrowingTable<BigCount> cache;
  return cache.ensure(m, [](std::size_t i) {
    return i == 0 ? BigCount(1) : BigCount(cache.get(i - 1) * i);
  });
}

namespace detail {

// Pascal rows are cached up to this bound; larger rows use the
// multiplicative formula on the fly (they only occur for huge n).
inline constexpr std::uint64_t kPascalRowCap = 600;

inline const std::vector<BigCount>& pascal_row(std::uint64_t a) {
  static GrowingTable<std::vector<BigCount>> rows;
  return rows.ensure(static_cast<std::size_t>(a), [](std::size_t i) {
    std::vector<BigCount> row(i + 1);
    row.front() = 1;
    row.back() = 1;
    if (i >= 2) {
      const std::vector<BigCount>& prev = rows.get(i - 1);
      for (std::size_t b = 1; b < i; ++b) row[b] = prev[b - 1] + prev[b];
    }
    return row;
  });
}

}  // namespace detail

// C(a, b) with the convention that the value is 0 when b < 0 or b > a.
inline BigCount binomial(std::uint64_t a, std::int64_t b) {
  if (b < 0 || static_cast<std::uint64_t>(b) > a) return 0;
  std::uint64_t k = static_cast<std::uint64_t>(b);
  if (k > a - k) k = a - k;
  if (k == 0) return 1;
  if (k == 1) return a;
  if (a <= detail::kPascalRowCap)
    return detail::pascal_row(a)[static_cast<std::size_t>(b)];
  // C(a, k) = C(a, k-1) * (a - k + 1) / k is exact at every step.
  BigCount result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= a - k + i;
    result /= i;
  }
  return result;
}

// n * (n-1) * ... * (n-q+1); 0 when q > n, 1 when q = 0.
inline BigCount falling_factorial(std::uint64_t n, std::uint64_t q) {
  if (q > n) return 0;
  BigCount result = 1;
  for (std::uint64_t i = 0; i < q; ++i) result *= n - i;
  return result;
}

// n^q with 0^0 = 1.
inline BigCount integer_power(std::uint64_t n, unsigned q) {
  if (q == 0) return 1;
  return boost::multiprecision::pow(BigCount(n), q);
}

inline ExactRatio make_ratio(const BigCount& num, const BigCount& den) {
  if (den <= 0) throw std::invalid_argument("make_ratio: denominator must be positive");
  return ExactRatio(num, den);
}

/* Decimal string of a non-negative rational, correctly rounded half-even to
 * `digits` fractional digits. Rendering is presentation only; callers keep
 * the exact value.
 */
inline std::string render_decimal(const ExactRatio& x, unsigned digits) {
  if (digits < 1) throw std::invalid_argument("render_decimal: digits must be >= 1");
  if (x < 0) return "-" + render_decimal(ExactRatio(-x), digits);
  const BigCount num = boost::multiprecision::numerator(x);
  const BigCount den = boost::multiprecision::denominator(x);
  const BigCount scale = detail::pow10(digits);
  BigCount scaled_q, rem;
  boost::multiprecision::divide_qr(BigCount(num * scale), den, scaled_q, rem);
  const BigCount twice = rem * 2;
  if (twice > den || (twice == den && boost::multiprecision::bit_test(scaled_q, 0)))
    ++scaled_q;
  const BigCount int_part = scaled_q / scale;
  std::string frac = BigCount(scaled_q % scale).str();
  frac.insert(frac.begin(), digits - frac.size(), '0');
  return int_part.str() + "." + frac;
}

namespace detail {

// Base-10 only; the cpp_int string constructor would honor 0x/0 prefixes.
inline BigCount parse_digits(const std::string& text, bool allow_empty) {
  if (text.empty()) {
    if (allow_empty) return 0;
    throw std::invalid_argument("parse_digits: empty");
  }
  BigCount value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw std::invalid_argument("parse_digits: not a digit");
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace detail

// Parses "a/b", a plain integer, or a decimal like "0.5" into an exact ratio.
inline ExactRatio parse_ratio(const std::string& text) {
  const auto bad = [&] { return std::invalid_argument("parse_ratio: cannot parse '" + text + "'"); };
  if (text.empty()) throw bad();
  if (text.front() == '-') return -parse_ratio(text.substr(1));
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      return make_ratio(detail::parse_digits(text.substr(0, slash), false),
                        detail::parse_digits(text.substr(slash + 1), false));
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return ExactRatio(detail::parse_digits(text, false));
    const std::string frac = text.substr(dot + 1);
    BigCount num = detail::parse_digits(text.substr(0, dot), true);
    num *= detail::pow10(static_cast<unsigned>(frac.size()));
    num += detail::parse_digits(frac, true);
    return make_ratio(num, detail::pow10(static_cast<unsigned>(frac.size())));
  } catch (const std::invalid_argument&) {
    throw bad();
  }
}

}  // namespace birthday
