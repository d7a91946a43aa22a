/* Acceptance suite: one checkable criterion per case, each printing a
 * single PASS/FAIL line with the measured detail. Run with no arguments to
 * execute all criteria, or with a criterion number (1-10) to run one.
 * Exit code is the number of failed criteria.
 */

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "birthday/birthday.hpp"

using namespace birthday;

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

struct Criterion {
  int number;
  std::string name;
  std::function<bool(std::ostream&)> run;
};

// The n^q <= 10^6 grid used by the oracle-equivalence criteria: dense in
// the small corner plus wide spot pairs.
std::vector<std::pair<std::uint64_t, unsigned>> oracle_grid() {
  std::vector<std::pair<std::uint64_t, unsigned>> grid;
  for (std::uint64_t n = 0; n <= 12; ++n)
    for (unsigned q = 0; q <= 20; ++q) {
      long double size = 1.0L;
      for (unsigned i = 0; i < q; ++i) size *= static_cast<long double>(n);
      if (size <= 1000000.0L) grid.emplace_back(n, q);
    }
  grid.emplace_back(50, 3);
  grid.emplace_back(100, 3);
  grid.emplace_back(1000, 2);
  return grid;
}

bool criterion_power_identity(std::ostream& out) {
  for (std::uint64_t n = 0; n <= 8; ++n)
    for (unsigned q = 0; q <= 15; ++q)
      if (total_arrangements(n, q, ArrangementKind::Buckets) != integer_power(n, q)) {
        out << "B(" << n << "," << q << ") != n^q";
        return false;
      }
  out << "B(n,q) = n^q exactly for n in [0,8], q in [0,15]";
  return true;
}

bool criterion_oracle_equivalence(std::ostream& out) {
  const auto grid = oracle_grid();
  for (const auto& [n, q] : grid) {
    if (const auto mismatch = compare_counts_to_oracle(n, q, {2, 3, 4}, 1000000)) {
      out << *mismatch;
      return false;
    }
  }
  out << grid.size() << " (n,q) cells with n^q <= 10^6, s in {2,3,4}, both kinds, "
      << "both conventions, no-collision, at-least-r (r<=3) and strong counts";
  return true;
}

bool criterion_classic_threshold(std::ostream& out) {
  const unsigned group = min_group_for_probability(365, 2, make_ratio(1, 2));
  if (group != 23) {
    out << "min group = " << group << ", expected 23";
    return false;
  }
  const ExactRatio p23 = probability_collision({365, 23, 2});
  const std::string rendered = render_decimal(p23, 6);
  if (rendered != "0.507297") {
    out << "P(23) rendered as " << rendered;
    return false;
  }
  ExactRatio no_pair = 1;  // independent product: prod (1 - i/365)
  for (unsigned i = 0; i < 23; ++i) no_pair *= make_ratio(365 - i, 365);
  if (p23 != 1 - no_pair) {
    out << "partition-sum probability disagrees with the product form";
    return false;
  }
  out << "min group 23, P(23) = 0.507297, matches independent product";
  return true;
}

bool criterion_expectation_threshold(std::ostream& out) {
  const unsigned group =
      min_group_for_expectation(365, 2, ExactRatio(1), CollisionConvention::Binomial);
  if (group != 28) {
    out << "min group = " << group << ", expected 28";
    return false;
  }
  if (expected_collisions({365, 27, 2, CollisionConvention::Binomial}) != make_ratio(351, 365) ||
      expected_collisions({365, 28, 2, CollisionConvention::Binomial}) != make_ratio(378, 365)) {
    out << "E(27) or E(28) differs from 351/365, 378/365";
    return false;
  }
  if (count_partitions(28) != 3718) {
    out << "partition count of 28 is not 3718";
    return false;
  }
  EngineStats stats;
  const BigCount collisions = total_collisions(365, 28, 2, ArrangementKind::Buckets,
                                               CollisionConvention::Binomial, {}, &stats);
  if (collisions != binomial(28, 2) * integer_power(365, 27)) {
    out << "C_B(365,28,2) partition sum != 378 * 365^27";
    return false;
  }
  out << "min group 28, E exact, full sum over " << stats.partitions_visited
      << " partitions equals 378*365^27";
  return true;
}

bool criterion_closed_form_agreement(std::ostream& out) {
  SumOptions general;
  general.force_general_sum = true;
  for (std::uint64_t n = 0; n <= 40; ++n)
    for (unsigned q = 0; q <= 40; ++q)
      for (ArrangementKind kind : {ArrangementKind::Tubes, ArrangementKind::Buckets}) {
        if (count_no_collision(n, q, 2, kind) != falling_factorial(n, q)) {
          out << "s=2 closed form != falling factorial at n=" << n << " q=" << q;
          return false;
        }
        if (count_no_collision(n, q, 2, kind) != count_no_collision(n, q, 2, kind, general)) {
          out << "s=2 fast path != general sum at n=" << n << " q=" << q;
          return false;
        }
        const BigCount fast3 = count_no_collision(n, q, 3, kind);
        if (fast3 != count_no_collision(n, q, 3, kind, general)) {
          out << "s=3 fast path != general sum at n=" << n << " q=" << q;
          return false;
        }
        if (q >= 2 * n + 1 && fast3 != 0) {
          out << "s=3 count nonzero at q >= 2n+1, n=" << n << " q=" << q;
          return false;
        }
      }
  out << "s=2 and s=3 closed forms equal the restricted sums for n,q in [0,40]";
  return true;
}

bool criterion_divisibility(std::ostream& out) {
  std::uint64_t checked = 0;
  for (unsigned q = 0; q <= 40; ++q) {
    bool ok = true;
    for_each_partition(q, {}, [&](Parts p) {
      Partition partition;
      partition.parts.assign(p.begin(), p.end());
      const auto [levels, parts_fact] = verify_factorial_divisibility(partition);
      ok = ok && levels && parts_fact;
      ++checked;
    });
    if (!ok) {
      out << "divisibility fails for some partition of " << q;
      return false;
    }
  }
  out << "both divisibility checks hold for all " << checked << " partitions of q <= 40";
  return true;
}

bool criterion_power_of_two(std::ostream& out) {
  for (unsigned q = 0; q <= 30; ++q) {
    BigCount sum = 0;
    for (unsigned i = 0; i <= q; ++i) sum += binomial(q, static_cast<std::int64_t>(i));
    if (total_arrangements(2, q, ArrangementKind::Buckets) != sum) {
      out << "B(2," << q << ") != sum of binomials";
      return false;
    }
  }
  out << "B(2,q) equals the binomial row sum for q <= 30";
  return true;
}

bool criterion_strong_birthday(std::ostream& out) {
  // (a) strong-birthday counts match brute force across the n^q <= 10^6 grid.
  PartitionConstraints no_singleton;
  no_singleton.no_singleton = true;
  for (const auto& [n, q] : oracle_grid()) {
    const OracleReport oracle = brute_force(n, q, 1000000);
    if (count_constrained(n, q, no_singleton, ArrangementKind::Buckets) !=
        oracle.strong_birthday_count) {
      out << "strong count mismatch at n=" << n << " q=" << q;
      return false;
    }
  }
  // (b) the exact constrained partition sum at n=8, q=40 sits within 4
  // standard errors of a seeded million-trial estimate.
  const ExactRatio exact = strong_birthday_probability(8, 40);
  const double exact_value =
      static_cast<double>(boost::multiprecision::numerator(exact)) /
      static_cast<double>(boost::multiprecision::denominator(exact));
  MonteCarloStatistic stat;
  stat.kind = MonteCarloStatistic::Kind::StrongBirthdayProbability;
  const MonteCarloEstimate estimate = monte_carlo(8, 40, stat, 1000000, 20250810);
  const double deviation = std::abs(estimate.point_estimate - exact_value);
  if (deviation > 4 * estimate.standard_error) {
    out << "n=8 q=40: |" << estimate.point_estimate << " - " << exact_value << "| > 4se ("
        << estimate.standard_error << ")";
    return false;
  }
  out << "grid counts match; n=8,q=40 exact " << exact_value << " vs MC "
      << estimate.point_estimate << " within 4se";
  return true;
}

bool criterion_monte_carlo_calibration(std::ostream& out) {
  const ExactRatio exact = probability_collision({365, 23, 2});
  const double exact_value =
      static_cast<double>(boost::multiprecision::numerator(exact)) /
      static_cast<double>(boost::multiprecision::denominator(exact));
  MonteCarloStatistic stat;
  stat.kind = MonteCarloStatistic::Kind::CollisionProbability;
  stat.s = 2;
  const MonteCarloEstimate estimate = monte_carlo(365, 23, stat, 1000000, 20250810);
  const double deviation = std::abs(estimate.point_estimate - exact_value);
  if (deviation > 0.002) {
    out << "|" << estimate.point_estimate << " - " << exact_value << "| = " << deviation
        << " > 0.002";
    return false;
  }
  out << "estimate " << estimate.point_estimate << " within " << deviation
      << " of exact (tolerance 0.002, 10^6 trials, seed 20250810)";
  return true;
}

struct Bench50Results {
  BigCount tubes, buckets, tube_collisions, bucket_collisions;
  std::uint64_t visited = 0;
  double wall_ms = 0;
};

Bench50Results bench_50(unsigned threads) {
  SumOptions opts;
  opts.threads = threads;
  Bench50Results r;
  const auto start = std::chrono::steady_clock::now();
  EngineStats stats;
  r.tubes = total_arrangements(50, 50, ArrangementKind::Tubes, opts, &stats);
  r.visited = stats.partitions_visited;
  r.buckets = total_arrangements(50, 50, ArrangementKind::Buckets, opts);
  r.tube_collisions = total_collisions(50, 50, 2, ArrangementKind::Tubes,
                                       CollisionConvention::Binomial, opts);
  r.bucket_collisions = total_collisions(50, 50, 2, ArrangementKind::Buckets,
                                         CollisionConvention::Binomial, opts);
  r.wall_ms = ms_since(start);
  return r;
}

// Wall time for the n = q = 50 sums at a given worker count, measured in a
// fresh process so neither run inherits the other's heap or cache state.
// Best of three in-process repetitions after a cache warm-up.
double timed_subprocess_bench(unsigned threads) {
  char self[4096];
  const ssize_t len = readlink("/proc/self/exe", self, sizeof self - 1);
  if (len <= 0) return -1.0;
  self[len] = '\0';
  const std::string command =
      "\"" + std::string(self) + "\" bench-50 " + std::to_string(threads) + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return -1.0;
  double value = -1.0;
  if (std::fscanf(pipe, "%lf", &value) != 1) value = -1.0;
  pclose(pipe);
  return value;
}

bool criterion_performance(std::ostream& out) {
  const Bench50Results single = bench_50(1);
  const Bench50Results quad = bench_50(4);

  if (single.visited != 204226) {
    out << "expected 204226 partitions of 50, visited " << single.visited;
    return false;
  }
  // Independent closed forms pin all the exact values that have one.
  BigCount rising = 1;
  for (unsigned i = 0; i < 50; ++i) rising *= 50 + i;
  if (single.tubes != rising || single.buckets != integer_power(50, 50) ||
      single.bucket_collisions != binomial(50, 2) * integer_power(50, 49)) {
    out << "exact values disagree with closed forms";
    return false;
  }
  if (single.tubes != quad.tubes || single.buckets != quad.buckets ||
      single.tube_collisions != quad.tube_collisions ||
      single.bucket_collisions != quad.bucket_collisions) {
    out << "1-worker and 4-worker values differ";
    return false;
  }

  // Interleaved fresh-process floors: a slow patch on the host hits both
  // configurations alike instead of poisoning one side's whole sample.
  double single_ms = -1.0, quad_ms = -1.0;
  for (int round = 0; round < 3; ++round) {
    const double s = timed_subprocess_bench(1);
    const double p = timed_subprocess_bench(4);
    if (s < 0 || p < 0) {
      out << "benchmark subprocess failed";
      return false;
    }
    single_ms = single_ms < 0 ? s : std::min(single_ms, s);
    quad_ms = quad_ms < 0 ? p : std::min(quad_ms, p);
  }
  if (single_ms > 60000.0) {
    out << "single-threaded run took " << single_ms << " ms (> 60 s)";
    return false;
  }
  const unsigned cores = std::thread::hardware_concurrency();
  // Measurable = at least 5% off the best single-worker floor, comfortably
  // above the 1-2% repeatability of best-of-N timings.
  if (!(quad_ms < 0.95 * single_ms)) {
    out << "no measurable 4-worker speedup: 1 worker " << single_ms << " ms, 4 workers "
        << quad_ms << " ms (hardware reports " << cores << " core(s))";
    return false;
  }
  out << "1 worker " << single_ms << " ms, 4 workers " << quad_ms
      << " ms, identical exact values over 204226 partitions (" << cores << " core(s))";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc >= 3 && std::string(argv[1]) == "bench-50") {
    const unsigned threads = static_cast<unsigned>(std::atoi(argv[2]));
    bench_50(threads);  // warm the caches
    double best = bench_50(threads).wall_ms;
    for (int repeat = 0; repeat < 2; ++repeat)
      best = std::min(best, bench_50(threads).wall_ms);
    std::cout << best << std::endl;
    return 0;
  }

  const std::vector<Criterion> criteria = {
      {1, "power-identity", criterion_power_identity},
      {2, "oracle-equivalence", criterion_oracle_equivalence},
      {3, "classic-threshold", criterion_classic_threshold},
      {4, "expectation-threshold", criterion_expectation_threshold},
      {5, "closed-form-agreement", criterion_closed_form_agreement},
      {6, "divisibility", criterion_divisibility},
      {7, "power-of-two-reduction", criterion_power_of_two},
      {8, "strong-birthday-scaled", criterion_strong_birthday},
      {9, "monte-carlo-calibration", criterion_monte_carlo_calibration},
      {10, "performance", criterion_performance},
  };

  int selected = 0;
  if (argc > 1) selected = std::atoi(argv[1]);

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (selected != 0 && criterion.number != selected) continue;
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream detail;
    bool pass = false;
    try {
      pass = criterion.run(detail);
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
    }
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion-" << criterion.number << "  "
              << criterion.name << ": " << detail.str() << "  [" << ms_since(start)
              << " ms]" << std::endl;
    if (!pass) ++failures;
  }
  return failures;
}
