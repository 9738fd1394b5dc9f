#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gapgauge/error.hpp"
#include "gapgauge/io/csv.hpp"
#include "gapgauge/series.hpp"

namespace gapgauge::io {

enum class TimestampFormat { epoch_seconds, iso8601 };
enum class MissingPolicy { reject, mask };

struct IngestSpec {
  std::filesystem::path path;
  std::string timestamp_column = "timestamp";
  std::string value_column = "value";
  TimestampFormat timestamp_format = TimestampFormat::epoch_seconds;
  std::int64_t expected_step = 3600;
  MissingPolicy missing_policy = MissingPolicy::reject;

  bool operator==(const IngestSpec&) const = default;
};

/// Parses "YYYY-MM-DD[T ]HH:MM[:SS[.frac]][Z|+HH:MM|-HH:MM]" (or a bare date)
/// to UTC epoch seconds. Fractional seconds are truncated.
inline std::optional<std::int64_t> parse_iso8601(std::string_view text) {
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  const auto num = [&](std::size_t pos, std::size_t len, int& out) {
    if (pos + len > text.size()) return false;
    return parse_int(text.substr(pos, len), out) && text[pos] != '-' && text[pos] != '+';
  };
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (!num(0, 4, year) || text.size() < 10 || text[4] != '-' || !num(5, 2, month) || text[7] != '-' ||
      !num(8, 2, day)) {
    return std::nullopt;
  }
  std::size_t pos = 10;
  if (pos < text.size()) {
    if (text[pos] != 'T' && text[pos] != ' ') return std::nullopt;
    if (!num(pos + 1, 2, hour) || pos + 3 >= text.size() || text[pos + 3] != ':' || !num(pos + 4, 2, minute)) {
      return std::nullopt;
    }
    pos += 6;
    if (pos < text.size() && text[pos] == ':') {
      if (!num(pos + 1, 2, second)) return std::nullopt;
      pos += 3;
      if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
        ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
      }
    }
  }
  std::int64_t offset = 0;
  if (pos < text.size()) {
    if (text[pos] == 'Z' && pos + 1 == text.size()) {
      pos += 1;
    } else if (text[pos] == '+' || text[pos] == '-') {
      int oh = 0, om = 0;
      if (!num(pos + 1, 2, oh)) return std::nullopt;
      std::size_t next = pos + 3;
      if (next < text.size() && text[next] == ':') ++next;
      if (next < text.size()) {
        if (!num(next, 2, om)) return std::nullopt;
        next += 2;
      }
      if (next != text.size()) return std::nullopt;
      offset = (text[pos] == '+' ? 1 : -1) * (oh * 3600 + om * 60);
      pos = next;
    } else {
      return std::nullopt;
    }
  }
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) return std::nullopt;
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 86'400 + hour * 3600 + minute * 60 + second - offset;
}

namespace detail {

inline std::size_t column_index(const std::vector<std::string>& header, const std::string& name,
                                const std::string& source) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorCode::schema, source + ":1: column '" + name + "' not in header");
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace detail

/// Parses CSV text into a regular series. Rows may come in any order;
/// duplicate timestamps are rejected. Absent timestamps (and empty value
/// cells) become masked positions under MissingPolicy::mask and a cadence
/// or parse error under MissingPolicy::reject.
inline TimeSeries ingest_csv_text(std::string_view text, const IngestSpec& spec, const std::string& source = "<csv>") {
  if (spec.expected_step <= 0) throw Error(ErrorCode::config, "expected_step must be positive");
  const auto table = parse_csv(text, source);
  if (table.rows.empty()) throw Error(ErrorCode::parse, source + ": missing header row");
  const auto& header = table.rows[0];
  const std::size_t t_col = detail::column_index(header, spec.timestamp_column, source);
  const std::size_t v_col = detail::column_index(header, spec.value_column, source);

  struct Row {
    std::int64_t time;
    std::optional<double> value;
    std::size_t line;
    std::size_t data_row;
  };
  std::vector<Row> rows;
  rows.reserve(table.rows.size() - 1);
  for (std::size_t r = 1; r < table.rows.size(); ++r) {
    const auto& fields = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    const auto where = source + ":" + std::to_string(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::parse, where + ": expected " + std::to_string(header.size()) + " fields, found " +
                                        std::to_string(fields.size()));
    }
    std::int64_t time = 0;
    if (spec.timestamp_format == TimestampFormat::epoch_seconds) {
      double as_double = 0.0;
      if (!parse_int(fields[t_col], time)) {
        if (!parse_double(fields[t_col], as_double) || std::floor(as_double) != as_double) {
          throw Error(ErrorCode::parse, where + ": bad epoch timestamp '" + fields[t_col] + "'");
        }
        time = static_cast<std::int64_t>(as_double);
      }
    } else {
      const auto parsed = parse_iso8601(fields[t_col]);
      if (!parsed) throw Error(ErrorCode::parse, where + ": bad ISO-8601 timestamp '" + fields[t_col] + "'");
      time = *parsed;
    }
    std::optional<double> value;
    std::string_view cell = fields[v_col];
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) cell.remove_suffix(1);
    if (!cell.empty() && cell != "NaN" && cell != "nan" && cell != "NA") {
      double v = 0.0;
      if (!parse_double(cell, v) || !std::isfinite(v)) {
        throw Error(ErrorCode::parse, where + ": bad value '" + fields[v_col] + "'");
      }
      value = v;
    } else if (spec.missing_policy == MissingPolicy::reject) {
      throw Error(ErrorCode::parse, where + ": missing value under reject policy");
    }
    rows.push_back({time, value, line, r});
  }
  if (rows.empty()) throw Error(ErrorCode::parse, source + ": no data rows");

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.time < b.time; });
  const std::int64_t start = rows.front().time;
  const std::int64_t step = spec.expected_step;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto where = source + ":" + std::to_string(rows[i].line) + " (data row " + std::to_string(rows[i].data_row) + ")";
    const std::int64_t delta = rows[i].time - rows[i - 1].time;
    if (delta == 0) throw Error(ErrorCode::duplicate_timestamp, where + ": duplicate timestamp " + std::to_string(rows[i].time));
    if (delta % step != 0) {
      throw Error(ErrorCode::cadence, where + ": timestamp off the " + std::to_string(step) + " s grid");
    }
    if (delta != step && spec.missing_policy == MissingPolicy::reject) {
      throw Error(ErrorCode::cadence, where + ": gap of " + std::to_string(delta) + " s where " + std::to_string(step) +
                                          " s was expected");
    }
  }

  const auto length = static_cast<std::size_t>((rows.back().time - start) / step) + 1;
  TimeSeries series;
  series.start_time = start;
  series.step = step;
  series.values.assign(length, 0.0);
  series.observed.assign(length, false);
  for (const auto& row : rows) {
    const auto idx = static_cast<std::size_t>((row.time - start) / step);
    if (row.value) {
      series.values[idx] = *row.value;
      series.observed[idx] = true;
    }
  }
  const auto report = validate(series);
  if (!report.ok()) throw Error(ErrorCode::parse, source + ": " + report.violations.front());
  return series;
}

inline TimeSeries ingest_csv(const IngestSpec& spec) {
  return ingest_csv_text(read_file(spec.path), spec, spec.path.string());
}

/// Observed positions as "timestamp,value" rows with epoch-second stamps.
inline std::string series_to_csv(const TimeSeries& series, const std::string& timestamp_column = "timestamp",
                                 const std::string& value_column = "value") {
  std::string out = quote_field(timestamp_column) + "," + quote_field(value_column) + "\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!series.observed[i]) continue;
    out += std::to_string(series.time_at(i));
    out += ',';
    out += format_double(series.values[i]);
    out += '\n';
  }
  return out;
}

}  // namespace gapgauge::io
