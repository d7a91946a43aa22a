#pragma once

/* Machine-readable output records. Every value-producing query is reported
 * with the same envelope:
 *
 *   { "query": {...}, "kind": "...", "exact": {"num": "...", "den": "..."},
 *     "decimal": "...", "elapsed_ms": ..., "engine": {"path": "...",
 *     "partitions_visited": ...} }
 *
 * Numerator and denominator travel as strings so consumers never round or
 * overflow; the decimal field is presentation only. CSV rows carry the same
 * fields in the same order, with the query flattened to k=v pairs.
 */

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "birthday/exact.hpp"
#include "birthday/oracle.hpp"

namespace birthday {

using Json = nlohmann::ordered_json;

struct OutputRecord {
  Json query = Json::object();
  std::string kind;
  BigCount num = 0;
  BigCount den = 1;
  std::string decimal;
  double elapsed_ms = 0.0;
  std::string engine_path = "general-sum";
  std::uint64_t partitions_visited = 0;

  ExactRatio value() const { return make_ratio(num, den); }
};

inline OutputRecord make_record(Json query, std::string kind, const ExactRatio& value,
                                unsigned digits) {
  OutputRecord record;
  record.query = std::move(query);
  record.kind = std::move(kind);
  record.num = boost::multiprecision::numerator(value);
  record.den = boost::multiprecision::denominator(value);
  record.decimal = render_decimal(value, digits);
  return record;
}

inline OutputRecord make_record(Json query, std::string kind, const BigCount& count,
                                unsigned digits) {
  return make_record(std::move(query), std::move(kind), ExactRatio(count), digits);
}

inline Json to_json(const OutputRecord& record) {
  Json out = Json::object();
  out["query"] = record.query;
  out["kind"] = record.kind;
  out["exact"] = Json{{"num", record.num.str()}, {"den", record.den.str()}};
  out["decimal"] = record.decimal;
  out["elapsed_ms"] = record.elapsed_ms;
  out["engine"] = Json{{"path", record.engine_path},
                       {"partitions_visited", record.partitions_visited}};
  return out;
}

namespace detail {

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

inline std::string flatten_query(const Json& query) {
  std::string flat;
  for (const auto& [key, value] : query.items()) {
    if (!flat.empty()) flat += ';';
    flat += key + "=" + (value.is_string() ? value.get<std::string>() : value.dump());
  }
  return flat;
}

}  // namespace detail

inline std::string csv_header() {
  return "query,kind,num,den,decimal,elapsed_ms,engine_path,partitions_visited";
}

inline std::string to_csv_row(const OutputRecord& record) {
  std::string row = detail::csv_escape(detail::flatten_query(record.query));
  row += ',' + detail::csv_escape(record.kind);
  row += ',' + record.num.str();
  row += ',' + record.den.str();
  row += ',' + record.decimal;
  row += ',' + std::to_string(record.elapsed_ms);
  row += ',' + detail::csv_escape(record.engine_path);
  row += ',' + std::to_string(record.partitions_visited);
  return row;
}

// A brute-force report in the standard record envelope, one record per
// tallied statistic.
inline std::vector<OutputRecord> oracle_report_records(const OracleReport& report,
                                                       unsigned digits) {
  std::vector<OutputRecord> records;
  const Json base{{"n", report.n}, {"q", report.q}};
  auto add = [&](Json query, std::string kind, const BigCount& count) {
    OutputRecord record = make_record(std::move(query), std::move(kind), count, digits);
    record.engine_path = "brute-force";
    records.push_back(std::move(record));
  };
  add(base, "oracle_total_tube_arrangements", report.total_tube_arrangements);
  add(base, "oracle_total_bucket_arrangements", report.total_bucket_arrangements);
  for (unsigned s = 2; s <= report.q; ++s) {
    const OracleSTable table = report.for_s(s);
    Json with_s = base;
    with_s["s"] = s;
    Json binom = with_s, window = with_s;
    binom["convention"] = "binomial";
    window["convention"] = "window";
    add(binom, "oracle_total_collisions", table.collisions_binomial);
    add(window, "oracle_total_collisions", table.collisions_window);
    add(with_s, "oracle_no_collision_count", table.none_count);
    for (unsigned r = 1; r <= 3; ++r) {
      Json with_r = with_s;
      with_r["r"] = r;
      add(with_r, "oracle_at_least_r_count", table.at_least_r[r - 1]);
    }
  }
  add(base, "oracle_strong_birthday_count", report.strong_birthday_count);
  return records;
}

}  // namespace birthday
