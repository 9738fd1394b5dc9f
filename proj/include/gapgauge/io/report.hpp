#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gapgauge/error.hpp"
#include "gapgauge/gaps.hpp"
#include "gapgauge/harness.hpp"
#include "gapgauge/io/csv.hpp"
#include "json.hpp"

namespace gapgauge::io {

inline const char* const records_header = "gap_id,imputer_id,gap_len,wd,jsd,rmse,mae,error";
inline const char* const aggregates_header = "imputer_id,gap_len,mean_wd,mean_jsd,mean_rmse,mean_mae,n,n_failed";

inline std::string records_to_csv(const std::vector<MetricRecord>& records) {
  std::string out = std::string(records_header) + "\n";
  for (const auto& r : records) {
    out += std::to_string(r.gap_id) + "," + quote_field(r.imputer_id) + "," + std::to_string(r.gap_len) + "," +
           format_double(r.wd) + "," + format_double(r.jsd) + "," + format_double(r.rmse) + "," +
           format_double(r.mae) + "," + quote_field(r.error) + "\n";
  }
  return out;
}

inline std::vector<MetricRecord> records_from_csv(std::string_view text, const std::string& source = "records.csv") {
  const auto table = parse_csv(text, source);
  if (table.rows.empty()) throw Error(ErrorCode::parse, source + ": missing header row");
  const std::vector<std::string> expected = {"gap_id", "imputer_id", "gap_len", "wd", "jsd", "rmse", "mae", "error"};
  if (table.rows[0] != expected) throw Error(ErrorCode::schema, source + ":1: unexpected header");
  std::vector<MetricRecord> records;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& f = table.rows[i];
    const auto where = source + ":" + std::to_string(table.line_numbers[i]);
    if (f.size() != expected.size()) throw Error(ErrorCode::parse, where + ": expected 8 fields");
    MetricRecord r;
    if (!parse_int(f[0], r.gap_id) || !parse_int(f[2], r.gap_len)) {
      throw Error(ErrorCode::parse, where + ": bad gap_id or gap_len");
    }
    r.imputer_id = f[1];
    r.error = f[7];
    double* metrics[] = {&r.wd, &r.jsd, &r.rmse, &r.mae};
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& cell = f[3 + k];
      if (cell.empty()) {
        *metrics[k] = std::nan("");
      } else if (!parse_double(cell, *metrics[k])) {
        throw Error(ErrorCode::parse, where + ": bad metric value '" + cell + "'");
      }
    }
    if (r.error.empty() && (std::isnan(r.wd) || std::isnan(r.jsd) || std::isnan(r.rmse) || std::isnan(r.mae))) {
      throw Error(ErrorCode::parse, where + ": metric missing on a record without error");
    }
    records.push_back(std::move(r));
  }
  return records;
}

inline std::string aggregates_to_csv(const std::vector<AggregateRow>& rows) {
  std::string out = std::string(aggregates_header) + "\n";
  for (const auto& a : rows) {
    out += quote_field(a.imputer_id) + "," + std::to_string(a.gap_len) + "," + format_double(a.mean_wd) + "," +
           format_double(a.mean_jsd) + "," + format_double(a.mean_rmse) + "," + format_double(a.mean_mae) + "," +
           std::to_string(a.n) + "," + std::to_string(a.n_failed) + "\n";
  }
  return out;
}

/// One row per gap length, one column per imputer; cells hold the mean of `metric`.
inline std::string plot_csv(const std::vector<AggregateRow>& rows, const std::vector<std::string>& imputers,
                            const std::string& metric) {
  std::map<std::int64_t, std::map<std::string, double>> table;
  for (const auto& a : rows) {
    double v = a.mean_wd;
    if (metric == "jsd") v = a.mean_jsd;
    if (metric == "rmse") v = a.mean_rmse;
    if (metric == "mae") v = a.mean_mae;
    table[a.gap_len][a.imputer_id] = v;
  }
  std::string out = "gap_len";
  for (const auto& id : imputers) out += "," + quote_field(id);
  out += "\n";
  for (const auto& [len, cells] : table) {
    out += std::to_string(len);
    for (const auto& id : imputers) {
      out += ",";
      if (const auto it = cells.find(id); it != cells.end()) out += format_double(it->second);
    }
    out += "\n";
  }
  return out;
}

inline nlohmann::ordered_json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json eval_config_to_json(const EvalConfig& config) {
  nlohmann::ordered_json j;
  j["n_gaps"] = config.n_gaps;
  j["min_len"] = config.min_len;
  j["max_len"] = config.max_len;
  j["seed"] = config.seed;
  j["bins"] = config.bins;
  j["epsilon"] = config.epsilon;
  j["bucketing"] = "exact_length";
  j["imputers"] = nlohmann::ordered_json::array();
  for (const auto& imp : config.imputers) {
    nlohmann::ordered_json entry;
    entry["id"] = imputer_id(imp);
    entry["kind"] = std::string(to_string(imp.kind));
    entry["params"] = params_to_json(imp);
    j["imputers"].push_back(std::move(entry));
  }
  return j;
}

inline nlohmann::ordered_json agreement_to_json(const std::vector<AgreementBlock>& blocks) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& b : blocks) {
    nlohmann::ordered_json jb;
    jb["gap_len"] = b.gap_len == 0 ? nlohmann::ordered_json("all") : nlohmann::ordered_json(b.gap_len);
    jb["imputers"] = b.imputers;
    jb["pairs"] = nlohmann::ordered_json::array();
    for (const auto& p : b.pairs) {
      nlohmann::ordered_json jp;
      jp["no_gt"] = p.no_gt_metric;
      jp["gt"] = p.gt_metric;
      jp["spearman"] = number_or_null(p.spearman);
      jp["kendall"] = number_or_null(p.kendall);
      jb["pairs"].push_back(std::move(jp));
    }
    out.push_back(std::move(jb));
  }
  return out;
}

inline nlohmann::ordered_json aggregates_to_json(const std::vector<AggregateRow>& rows) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& a : rows) {
    nlohmann::ordered_json j;
    j["imputer_id"] = a.imputer_id;
    j["gap_len"] = a.gap_len == 0 ? nlohmann::ordered_json("all") : nlohmann::ordered_json(a.gap_len);
    j["mean_wd"] = number_or_null(a.mean_wd);
    j["mean_jsd"] = number_or_null(a.mean_jsd);
    j["mean_rmse"] = number_or_null(a.mean_rmse);
    j["mean_mae"] = number_or_null(a.mean_mae);
    j["n"] = a.n;
    j["n_failed"] = a.n_failed;
    out.push_back(std::move(j));
  }
  return out;
}

inline nlohmann::ordered_json report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["provenance"]["seed"] = report.config.seed;
  j["provenance"]["prng"] = report.prng;
  j["provenance"]["config"] = eval_config_to_json(report.config);
  j["interpretation"]["wd"] = "no ground truth; distance to the pre-gap window, lower is better";
  j["interpretation"]["jsd"] = "no ground truth; base-2 divergence from the pre-gap window in [0, 1], lower is better";
  j["interpretation"]["rmse"] = "ground truth; lower is better";
  j["interpretation"]["mae"] = "ground truth; lower is better";
  j["gaps"] = to_json(report.gaps);
  j["imputers"] = report.imputer_ids;
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    nlohmann::ordered_json jr;
    jr["gap_id"] = r.gap_id;
    jr["imputer_id"] = r.imputer_id;
    jr["gap_len"] = r.gap_len;
    jr["wd"] = number_or_null(r.wd);
    jr["jsd"] = number_or_null(r.jsd);
    jr["rmse"] = number_or_null(r.rmse);
    jr["mae"] = number_or_null(r.mae);
    if (!r.ok()) jr["error"] = r.error;
    j["records"].push_back(std::move(jr));
  }
  j["aggregates"] = aggregates_to_json(report.aggregates);
  j["pooled"] = aggregates_to_json(report.pooled);
  j["rank_agreement"] = agreement_to_json(report.agreement);
  return j;
}

/// Writes report.json, records.csv, aggregates.csv and plot_{wd,jsd,rmse,mae}.csv,
/// each through a temporary file and rename. Returns the written paths.
inline std::vector<std::filesystem::path> emit_report(const EvalReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<std::pair<std::filesystem::path, std::string>> files = {
      {out_dir / "report.json", report_to_json(report).dump(2) + "\n"},
      {out_dir / "records.csv", records_to_csv(report.records)},
      {out_dir / "aggregates.csv", aggregates_to_csv(report.aggregates)},
  };
  for (const char* metric : {"wd", "jsd", "rmse", "mae"}) {
    files.emplace_back(out_dir / (std::string("plot_") + metric + ".csv"),
                       plot_csv(report.aggregates, report.imputer_ids, metric));
  }
  std::vector<std::filesystem::path> written;
  for (const auto& [path, contents] : files) {
    write_file_atomic(path, contents);
    written.push_back(path);
  }
  return written;
}

}  // namespace gapgauge::io
