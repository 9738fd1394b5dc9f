#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>

#include "gapgauge/error.hpp"
#include "gapgauge/harness.hpp"
#include "gapgauge/imputers/imputer.hpp"
#include "gapgauge/io/csv.hpp"
#include "gapgauge/io/ingest.hpp"
#include "json.hpp"

namespace gapgauge::io {

using json = nlohmann::ordered_json;

inline constexpr int config_schema_version = 1;

/// Everything a `run` needs: how to read the series and how to evaluate it.
/// Durations in the file are hours; in memory they are samples of
/// `series.expected_step` seconds.
struct RunConfig {
  IngestSpec series;
  EvalConfig eval;
  std::optional<std::uint64_t> seed;  // absent: fall back to other seed sources
};

namespace detail {

/// In-memory sample-count field -> file field in hours.
inline constexpr std::pair<const char*, const char*> hour_fields[] = {
    {"context", "context_hours"},     {"season", "season_hours"},         {"train_span", "train_hours"},
    {"min_train", "min_train_hours"}, {"sma_window", "sma_window_hours"},
};

inline std::int64_t hours_to_samples(const json& value, std::int64_t step, const std::string& path) {
  if (!value.is_number()) throw Error(ErrorCode::schema, path + ": expected a number of hours");
  const double samples = value.get<double>() * 3600.0 / static_cast<double>(step);
  const double rounded = std::round(samples);
  if (std::abs(samples - rounded) > 1e-9 * std::max(1.0, std::abs(samples))) {
    throw Error(ErrorCode::schema, path + ": " + value.dump() + " h is not a whole number of " + std::to_string(step) +
                                       " s samples");
  }
  return static_cast<std::int64_t>(rounded);
}

inline json samples_to_hours(std::int64_t samples, std::int64_t step) {
  const std::int64_t seconds = samples * step;
  if (seconds % 3600 == 0) return json(seconds / 3600);
  return json(static_cast<double>(seconds) / 3600.0);
}

template <typename T>
T require(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) throw Error(ErrorCode::schema, path + "." + key + ": missing");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::schema, path + "." + key + ": wrong type");
  }
}

inline void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& path) {
  if (!obj.is_object()) throw Error(ErrorCode::schema, path + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw Error(ErrorCode::schema, (path.empty() ? key : path + "." + key) + ": unknown field");
  }
}

}  // namespace detail

inline std::string to_string(TimestampFormat f) { return f == TimestampFormat::epoch_seconds ? "epoch" : "iso8601"; }
inline std::string to_string(MissingPolicy p) { return p == MissingPolicy::reject ? "reject" : "mask"; }

inline json imputer_to_config_json(const ImputerConfig& config, std::int64_t step) {
  json out;
  out["kind"] = std::string(to_string(config.kind));
  const auto params = params_to_json(config);
  for (const auto& [key, value] : params.items()) {
    const char* hours_key = nullptr;
    for (const auto& [field, hours] : detail::hour_fields) {
      if (key == field) hours_key = hours;
    }
    if (hours_key) {
      out[hours_key] = detail::samples_to_hours(value.get<std::int64_t>(), step);
    } else {
      out[key] = value;
    }
  }
  return out;
}

inline ImputerConfig imputer_from_config_json(const json& j, std::int64_t step, const std::string& path) {
  if (!j.is_object()) throw Error(ErrorCode::schema, path + ": expected an object");
  const auto kind = [&] {
    try {
      return parse_imputer_kind(detail::require<std::string>(j, "kind", path));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::schema) throw;
      throw Error(ErrorCode::schema, path + ".kind: " + e.what());
    }
  }();
  json params = json::object();
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") continue;
    const char* sample_key = nullptr;
    for (const auto& [field, hours] : detail::hour_fields) {
      if (key == hours) sample_key = field;
    }
    if (sample_key) {
      params[sample_key] = detail::hours_to_samples(value, step, path + "." + key);
    } else {
      params[key] = value;
    }
  }
  return imputer_config_from_json(kind, params, path);
}

inline RunConfig config_from_json(const json& root) {
  detail::reject_unknown(root, {"schema_version", "series", "seed", "gaps", "metrics", "threads", "imputers"}, "");
  const auto version = detail::require<int>(root, "schema_version", "$");
  if (version != config_schema_version) {
    throw Error(ErrorCode::schema, "schema_version: unsupported version " + std::to_string(version));
  }
  RunConfig config;

  if (root.contains("series")) {
    const auto& s = root.at("series");
    detail::reject_unknown(s, {"timestamp_column", "value_column", "timestamp_format", "expected_step", "missing_policy"},
                           "series");
    if (s.contains("timestamp_column")) config.series.timestamp_column = detail::require<std::string>(s, "timestamp_column", "series");
    if (s.contains("value_column")) config.series.value_column = detail::require<std::string>(s, "value_column", "series");
    if (s.contains("timestamp_format")) {
      const auto f = detail::require<std::string>(s, "timestamp_format", "series");
      if (f == "epoch") {
        config.series.timestamp_format = TimestampFormat::epoch_seconds;
      } else if (f == "iso8601") {
        config.series.timestamp_format = TimestampFormat::iso8601;
      } else {
        throw Error(ErrorCode::schema, "series.timestamp_format: expected 'epoch' or 'iso8601'");
      }
    }
    if (s.contains("expected_step")) config.series.expected_step = detail::require<std::int64_t>(s, "expected_step", "series");
    if (s.contains("missing_policy")) {
      const auto p = detail::require<std::string>(s, "missing_policy", "series");
      if (p == "reject") {
        config.series.missing_policy = MissingPolicy::reject;
      } else if (p == "mask") {
        config.series.missing_policy = MissingPolicy::mask;
      } else {
        throw Error(ErrorCode::schema, "series.missing_policy: expected 'reject' or 'mask'");
      }
    }
  }
  const std::int64_t step = config.series.expected_step;
  if (step <= 0) throw Error(ErrorCode::schema, "series.expected_step: must be > 0");

  if (root.contains("seed")) config.seed = detail::require<std::uint64_t>(root, "seed", "$");
  if (config.seed) config.eval.seed = *config.seed;

  const auto& gaps = root.contains("gaps") ? root.at("gaps") : json::object();
  detail::reject_unknown(gaps, {"count", "min_hours", "max_hours"}, "gaps");
  if (gaps.contains("count")) config.eval.n_gaps = detail::require<std::int64_t>(gaps, "count", "gaps");
  if (gaps.contains("min_hours")) config.eval.min_len = detail::hours_to_samples(gaps.at("min_hours"), step, "gaps.min_hours");
  if (gaps.contains("max_hours")) config.eval.max_len = detail::hours_to_samples(gaps.at("max_hours"), step, "gaps.max_hours");
  if (config.eval.n_gaps < 1) throw Error(ErrorCode::schema, "gaps.count: must be >= 1");
  if (config.eval.min_len < 1) throw Error(ErrorCode::schema, "gaps.min_hours: must cover at least one sample");
  if (config.eval.min_len > config.eval.max_len) {
    throw Error(ErrorCode::schema, "gaps.min_hours, gaps.max_hours: min_hours exceeds max_hours");
  }

  if (root.contains("metrics")) {
    const auto& m = root.at("metrics");
    detail::reject_unknown(m, {"bins", "epsilon"}, "metrics");
    if (m.contains("bins")) config.eval.bins = detail::require<int>(m, "bins", "metrics");
    if (m.contains("epsilon")) config.eval.epsilon = detail::require<double>(m, "epsilon", "metrics");
  }
  if (root.contains("threads")) config.eval.threads = detail::require<unsigned>(root, "threads", "$");

  if (!root.contains("imputers") || !root.at("imputers").is_array()) {
    throw Error(ErrorCode::schema, "imputers: expected an array");
  }
  const auto& imputers = root.at("imputers");
  for (std::size_t i = 0; i < imputers.size(); ++i) {
    config.eval.imputers.push_back(imputer_from_config_json(imputers[i], step, "imputers[" + std::to_string(i) + "]"));
  }
  validate(config.eval);
  return config;
}

/// Canonical form; config_from_json(config_to_json(c)) reproduces c.
inline json config_to_json(const RunConfig& config) {
  const std::int64_t step = config.series.expected_step;
  json root;
  root["schema_version"] = config_schema_version;
  json& s = root["series"];
  s["timestamp_column"] = config.series.timestamp_column;
  s["value_column"] = config.series.value_column;
  s["timestamp_format"] = to_string(config.series.timestamp_format);
  s["expected_step"] = config.series.expected_step;
  s["missing_policy"] = to_string(config.series.missing_policy);
  if (config.seed) root["seed"] = *config.seed;
  json& gaps = root["gaps"];
  gaps["count"] = config.eval.n_gaps;
  gaps["min_hours"] = detail::samples_to_hours(config.eval.min_len, step);
  gaps["max_hours"] = detail::samples_to_hours(config.eval.max_len, step);
  json& metrics = root["metrics"];
  metrics["bins"] = config.eval.bins;
  metrics["epsilon"] = config.eval.epsilon;
  root["threads"] = config.eval.threads;
  root["imputers"] = json::array();
  for (const auto& imp : config.eval.imputers) root["imputers"].push_back(imputer_to_config_json(imp, step));
  return root;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  const auto text = read_file(path);
  json root;
  try {
    root = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::parse, path.string() + ": " + e.what());
  }
  try {
    return config_from_json(root);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + std::string(e.what()).substr(to_string(e.code()).size() + 2));
  }
}

}  // namespace gapgauge::io
