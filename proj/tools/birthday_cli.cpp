/* birthday: exact counting and probability CLI for balls-in-containers
 * collision questions.
 *
 * Every value-producing subcommand emits OutputRecords (see
 * include/birthday/record.hpp): plain prints the natural value, json prints
 * one object per line, csv prints a header plus one row per record.
 * Exit codes: 0 success, 2 usage error, 3 verification mismatch.
 */

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "birthday/birthday.hpp"

using namespace birthday;

namespace {

struct GlobalOptions {
  std::string format = "plain";
  unsigned digits = 6;
  unsigned threads = 0;
  bool force_general_sum = false;
  bool i_know = false;

  SumOptions sum_options() const { return {threads, force_general_sum}; }
};

unsigned default_threads() {
  if (const char* env = std::getenv("BIRTHDAY_THREADS")) {
    const long value = std::strtol(env, nullptr, 10);
    if (value >= 1) return static_cast<unsigned>(value);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

ArrangementKind parse_kind(const std::string& text) {
  return text == "tubes" ? ArrangementKind::Tubes : ArrangementKind::Buckets;
}

CollisionConvention parse_convention(const std::string& text) {
  return text == "window" ? CollisionConvention::Window : CollisionConvention::Binomial;
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void attach_engine(OutputRecord& record, const EngineStats& stats, double elapsed) {
  record.elapsed_ms = elapsed;
  record.engine_path = stats.path;
  record.partitions_visited = stats.partitions_visited;
}

// Plain output favors the value a person asked for: bare integers for
// counts and group sizes, the rounded decimal for ratios.
std::string plain_value(const OutputRecord& record) {
  return record.den == 1 ? record.num.str() : record.decimal;
}

void emit(const std::vector<OutputRecord>& records, const GlobalOptions& global,
          bool label_plain = false) {
  if (global.format == "json") {
    for (const auto& record : records) std::cout << to_json(record).dump() << "\n";
    return;
  }
  if (global.format == "csv") {
    std::cout << csv_header() << "\n";
    for (const auto& record : records) std::cout << to_csv_row(record) << "\n";
    return;
  }
  for (const auto& record : records) {
    if (label_plain) std::cout << record.kind << " ";
    std::cout << plain_value(record) << "\n";
  }
}

int refuse_large_q(const std::string& name, unsigned q, const GlobalOptions& global) {
  if (q <= 90 || global.i_know) return 0;
  std::cerr << name << ": q = " << q
            << " enumerates a very large partition space; pass --i-know to proceed\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact counting for birthday-style collision problems"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  global.threads = default_threads();
  app.add_option("--format", global.format, "Output format")
      ->check(CLI::IsMember({"plain", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--digits", global.digits, "Fractional digits in decimal renderings")
      ->check(CLI::Range(1u, 1000u))
      ->capture_default_str();
  app.add_option("--threads", global.threads,
                 "Worker threads for partition sums (default: BIRTHDAY_THREADS or all cores)");
  app.add_flag("--force-general-sum", global.force_general_sum,
               "Disable closed-form fast paths; always evaluate the partition sum");
  app.add_flag("--i-know", global.i_know, "Override the q > 90 size guard");

  std::uint64_t n = 0;
  unsigned q = 0, s = 2;
  std::string kind_text = "buckets", convention_text = "binomial";

  auto* count_cmd = app.add_subcommand("count", "Total arrangements T(n,q) or B(n,q)");
  count_cmd->add_option("--n", n, "Container count")->required();
  count_cmd->add_option("--q", q, "Ball count")->required();
  count_cmd->add_option("--kind", kind_text, "Container kind")
      ->check(CLI::IsMember({"tubes", "buckets"}))
      ->required();

  auto* collisions_cmd =
      app.add_subcommand("collisions", "Total s-collisions over all arrangements");
  collisions_cmd->add_option("--n", n)->required();
  collisions_cmd->add_option("--q", q)->required();
  collisions_cmd->add_option("--s", s, "Collision order (>= 2)")->required();
  collisions_cmd->add_option("--kind", kind_text)
      ->check(CLI::IsMember({"tubes", "buckets"}))
      ->required();
  collisions_cmd->add_option("--convention", convention_text)
      ->check(CLI::IsMember({"binomial", "window"}))
      ->capture_default_str();

  auto* none_cmd = app.add_subcommand("none", "Arrangements with zero s-collisions");
  none_cmd->add_option("--n", n)->required();
  none_cmd->add_option("--q", q)->required();
  none_cmd->add_option("--s", s)->required();
  none_cmd->add_option("--kind", kind_text)
      ->check(CLI::IsMember({"tubes", "buckets"}))
      ->required();

  auto* prob_cmd = app.add_subcommand("prob", "P(at least one s-collision) over uniform buckets");
  prob_cmd->add_option("--n", n)->required();
  prob_cmd->add_option("--q", q)->required();
  prob_cmd->add_option("--s", s)->capture_default_str();

  auto* expect_cmd = app.add_subcommand("expect", "Expected number of s-collisions");
  expect_cmd->add_option("--n", n)->required();
  expect_cmd->add_option("--q", q)->required();
  expect_cmd->add_option("--s", s)->capture_default_str();
  expect_cmd->add_option("--convention", convention_text)
      ->check(CLI::IsMember({"binomial", "window"}))
      ->capture_default_str();

  std::string prob_threshold, expect_target;
  auto* threshold_cmd = app.add_subcommand("threshold", "Minimal group size reaching a target");
  threshold_cmd->add_option("--n", n)->required();
  threshold_cmd->add_option("--s", s)->capture_default_str();
  auto* prob_opt = threshold_cmd->add_option("--prob", prob_threshold,
                                             "Probability threshold (exact, e.g. 1/2 or 0.5)");
  auto* expect_opt =
      threshold_cmd->add_option("--expect", expect_target, "Expectation target (exact)");
  threshold_cmd->add_option("--convention", convention_text)
      ->check(CLI::IsMember({"binomial", "window"}))
      ->capture_default_str();
  prob_opt->excludes(expect_opt);

  auto* strong_cmd = app.add_subcommand("strong", "Strong birthday probability and count");
  strong_cmd->add_option("--n", n)->required();
  strong_cmd->add_option("--q", q)->required();

  unsigned part_q = 0;
  std::optional<unsigned> max_part, min_len, max_len;
  std::string at_least_text;
  bool no_singleton = false, list_mode = false, count_mode = false;
  auto* partitions_cmd = app.add_subcommand("partitions", "Enumerate or count partitions of q");
  partitions_cmd->add_option("--q", part_q)->required();
  partitions_cmd->add_option("--max-part", max_part, "Largest allowed part");
  partitions_cmd->add_option("--min-len", min_len, "Minimum number of parts");
  partitions_cmd->add_option("--max-len", max_len, "Maximum number of parts");
  partitions_cmd->add_option("--at-least", at_least_text,
                             "s:r requires the s-th part to be at least r");
  partitions_cmd->add_flag("--no-singleton", no_singleton,
                           "Require the first two parts to be equal");
  auto* list_flag = partitions_cmd->add_flag("--list", list_mode, "List the partitions");
  auto* count_flag =
      partitions_cmd->add_flag("--count", count_mode, "Only count them (default)");
  list_flag->excludes(count_flag);

  std::uint64_t verify_max_n = 4, verify_cap = 1'000'000;
  unsigned verify_max_q = 7;
  auto* verify_cmd = app.add_subcommand("verify", "Run the self-verification identity suite");
  verify_cmd->add_option("--max-n", verify_max_n)->capture_default_str();
  verify_cmd->add_option("--max-q", verify_max_q)->capture_default_str();
  verify_cmd->add_option("--cap", verify_cap, "Brute-force size bound")->capture_default_str();

  unsigned q_from = 0, q_to = 0;
  std::string what = "prob";
  auto* sweep_cmd = app.add_subcommand("sweep", "One record per q in a range");
  sweep_cmd->add_option("--n", n)->required();
  sweep_cmd->add_option("--s", s)->capture_default_str();
  sweep_cmd->add_option("--q-from", q_from)->required();
  sweep_cmd->add_option("--q-to", q_to)->required();
  sweep_cmd->add_option("--what", what)
      ->check(CLI::IsMember({"prob", "expect", "count"}))
      ->capture_default_str();
  sweep_cmd->add_option("--kind", kind_text)
      ->check(CLI::IsMember({"tubes", "buckets"}))
      ->capture_default_str();
  sweep_cmd->add_option("--convention", convention_text)
      ->check(CLI::IsMember({"binomial", "window"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  const SumOptions opts = global.sum_options();
  const ArrangementKind kind = parse_kind(kind_text);
  const CollisionConvention convention = parse_convention(convention_text);

  try {
    if (count_cmd->parsed()) {
      if (int code = refuse_large_q("count", q, global)) return code;
      Stopwatch watch;
      EngineStats stats;
      const BigCount total = total_arrangements(n, q, kind, opts, &stats);
      OutputRecord record = make_record({{"n", n}, {"q", q}, {"kind", kind_text}},
                                        "total_arrangements", total, global.digits);
      attach_engine(record, stats, watch.elapsed_ms());
      emit({record}, global);
      return 0;
    }

    if (collisions_cmd->parsed()) {
      if (int code = refuse_large_q("collisions", q, global)) return code;
      Stopwatch watch;
      EngineStats stats;
      const BigCount total = total_collisions(n, q, s, kind, convention, opts, &stats);
      OutputRecord record = make_record(
          {{"n", n}, {"q", q}, {"s", s}, {"kind", kind_text}, {"convention", convention_text}},
          "total_collisions", total, global.digits);
      attach_engine(record, stats, watch.elapsed_ms());
      emit({record}, global);
      return 0;
    }

    if (none_cmd->parsed()) {
      Stopwatch watch;
      EngineStats stats;
      const BigCount count = count_no_collision(n, q, s, kind, opts, &stats);
      OutputRecord record = make_record({{"n", n}, {"q", q}, {"s", s}, {"kind", kind_text}},
                                        "no_collision_count", count, global.digits);
      attach_engine(record, stats, watch.elapsed_ms());
      emit({record}, global);
      return 0;
    }

    if (prob_cmd->parsed()) {
      Stopwatch watch;
      EngineStats stats;
      const ExactRatio p = probability_collision({n, q, s}, opts, &stats);
      OutputRecord record = make_record({{"n", n}, {"q", q}, {"s", s}},
                                        "collision_probability", p, global.digits);
      attach_engine(record, stats, watch.elapsed_ms());
      emit({record}, global);
      return 0;
    }

    if (expect_cmd->parsed()) {
      Stopwatch watch;
      EngineStats stats;
      const ExactRatio e = expected_collisions({n, q, s, convention}, opts, &stats);
      OutputRecord record =
          make_record({{"n", n}, {"q", q}, {"s", s}, {"convention", convention_text}},
                      "expected_collisions", e, global.digits);
      attach_engine(record, stats, watch.elapsed_ms());
      emit({record}, global);
      return 0;
    }

    if (threshold_cmd->parsed()) {
      if (prob_threshold.empty() && expect_target.empty()) {
        std::cerr << "threshold: one of --prob or --expect is required\n";
        return 2;
      }
      Stopwatch watch;
      OutputRecord record;
      if (!prob_threshold.empty()) {
        const unsigned group =
            min_group_for_probability(n, s, parse_ratio(prob_threshold), opts);
        record = make_record({{"n", n}, {"s", s}, {"prob", prob_threshold}},
                             "min_group_for_probability", BigCount(group), global.digits);
      } else {
        const unsigned group =
            min_group_for_expectation(n, s, parse_ratio(expect_target), convention, opts);
        record = make_record(
            {{"n", n}, {"s", s}, {"expect", expect_target}, {"convention", convention_text}},
            "min_group_for_expectation", BigCount(group), global.digits);
      }
      record.elapsed_ms = watch.elapsed_ms();
      record.engine_path = "threshold-scan";
      emit({record}, global);
      return 0;
    }

    if (strong_cmd->parsed()) {
      Stopwatch watch;
      EngineStats stats;
      PartitionConstraints no_single;
      no_single.no_singleton = true;
      const BigCount count =
          count_constrained(n, q, no_single, ArrangementKind::Buckets, opts, &stats);
      const double elapsed = watch.elapsed_ms();
      OutputRecord probability =
          make_record({{"n", n}, {"q", q}}, "strong_birthday_probability",
                      make_ratio(count, integer_power(n, q)), global.digits);
      attach_engine(probability, stats, elapsed);
      OutputRecord raw =
          make_record({{"n", n}, {"q", q}}, "strong_birthday_count", count, global.digits);
      attach_engine(raw, stats, elapsed);
      emit({probability, raw}, global, true);
      return 0;
    }

    if (partitions_cmd->parsed()) {
      PartitionConstraints constraints;
      constraints.max_part = max_part;
      constraints.min_len = min_len;
      constraints.max_len = max_len;
      constraints.no_singleton = no_singleton;
      if (!at_least_text.empty()) {
        const auto colon = at_least_text.find(':');
        bool ok = colon != std::string::npos;
        if (ok) {
          try {
            constraints.at_least_at = {
                {static_cast<unsigned>(std::stoul(at_least_text.substr(0, colon))),
                 static_cast<unsigned>(std::stoul(at_least_text.substr(colon + 1)))}};
          } catch (const std::exception&) {
            ok = false;
          }
        }
        if (!ok) {
          std::cerr << "partitions: --at-least expects s:r\n";
          return 2;
        }
      }
      Json query{{"q", part_q}};
      if (max_part) query["max_part"] = *max_part;
      if (min_len) query["min_len"] = *min_len;
      if (max_len) query["max_len"] = *max_len;
      if (constraints.at_least_at)
        query["at_least"] = std::to_string(constraints.at_least_at->first) + ":" +
                            std::to_string(constraints.at_least_at->second);
      if (no_singleton) query["no_singleton"] = true;

      Stopwatch watch;
      if (list_mode) {
        std::vector<std::vector<unsigned>> items;
        for_each_partition(part_q, constraints,
                           [&](Parts p) { items.emplace_back(p.begin(), p.end()); });
        if (global.format == "json") {
          Json out{{"query", query},
                   {"kind", "partitions"},
                   {"items", items},
                   {"count", items.size()},
                   {"elapsed_ms", watch.elapsed_ms()}};
          std::cout << out.dump() << "\n";
        } else {
          if (global.format == "csv") std::cout << "parts\n";
          for (const auto& item : items) {
            std::string line;
            for (unsigned part : item)
              line += (line.empty() ? "" : " ") + std::to_string(part);
            std::cout << line << "\n";
          }
        }
        return 0;
      }
      const BigCount count = count_partitions(part_q, constraints);
      OutputRecord record = make_record(query, "partition_count", count, global.digits);
      record.elapsed_ms = watch.elapsed_ms();
      record.engine_path = "enumeration";
      emit({record}, global);
      return 0;
    }

    if (verify_cmd->parsed()) {
      const auto checks = run_identity_suite(verify_max_n, verify_max_q, verify_cap, opts);
      if (global.format == "json") {
        for (const auto& check : checks) {
          Json out{{"identity", check.identity},
                   {"pass", check.pass},
                   {"cases", check.cases},
                   {"detail", check.detail}};
          std::cout << out.dump() << "\n";
        }
      } else if (global.format == "csv") {
        std::cout << "identity,pass,cases,detail\n";
        for (const auto& check : checks)
          std::cout << check.identity << "," << (check.pass ? "pass" : "fail") << ","
                    << check.cases << "," << check.detail << "\n";
      } else {
        for (const auto& check : checks)
          std::cout << (check.pass ? "pass" : "FAIL") << "  " << check.identity << " ("
                    << check.cases << " cases)"
                    << (check.detail.empty() ? "" : ": " + check.detail) << "\n";
      }
      bool all_pass = true;
      for (const auto& check : checks)
        if (!check.pass) {
          std::cerr << "verification mismatch: " << check.identity << ": " << check.detail
                    << "\n";
          all_pass = false;
        }
      return all_pass ? 0 : 3;
    }

    if (sweep_cmd->parsed()) {
      if (q_to < q_from) {
        std::cerr << "sweep: --q-to must be >= --q-from\n";
        return 2;
      }
      std::vector<OutputRecord> records;
      for (unsigned qq = q_from; qq <= q_to; ++qq) {
        Stopwatch watch;
        EngineStats stats;
        OutputRecord record;
        if (what == "prob") {
          const ExactRatio p = probability_collision({n, qq, s}, opts, &stats);
          record = make_record({{"n", n}, {"q", qq}, {"s", s}, {"what", what}},
                               "collision_probability", p, global.digits);
        } else if (what == "expect") {
          const ExactRatio e = expected_collisions({n, qq, s, convention}, opts, &stats);
          record = make_record(
              {{"n", n}, {"q", qq}, {"s", s}, {"convention", convention_text}, {"what", what}},
              "expected_collisions", e, global.digits);
        } else {
          const BigCount total = total_collisions(n, qq, s, kind, convention, opts, &stats);
          record = make_record({{"n", n},
                                {"q", qq},
                                {"s", s},
                                {"kind", kind_text},
                                {"convention", convention_text},
                                {"what", what}},
                               "total_collisions", total, global.digits);
        }
        attach_engine(record, stats, watch.elapsed_ms());
        records.push_back(std::move(record));
      }
      emit(records, global);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  std::cerr << "no subcommand\n";
  return 2;
}
