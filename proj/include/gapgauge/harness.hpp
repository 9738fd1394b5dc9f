#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "gapgauge/gaps.hpp"
#include "gapgauge/imputers/imputer.hpp"
#include "gapgauge/metrics.hpp"
#include "gapgauge/random.hpp"
#include "gapgauge/rank.hpp"

namespace gapgauge {

enum class Bucketing { exact_length };

struct EvalConfig {
  std::int64_t n_gaps = 100;
  std::int64_t min_len = 2;
  std::int64_t max_len = 48;
  std::uint64_t seed = 7;
  std::vector<ImputerConfig> imputers;
  int bins = 10;
  double epsilon = 1e-6;
  Bucketing bucketing = Bucketing::exact_length;
  /// Worker threads for (gap, imputer) jobs; 0 uses the hardware concurrency.
  unsigned threads = 0;
};

inline void validate(const EvalConfig& config) {
  if (config.n_gaps < 1) throw Error(ErrorCode::schema, "n_gaps: must be >= 1");
  if (config.min_len < 1) throw Error(ErrorCode::schema, "min_len: must be >= 1");
  if (config.min_len > config.max_len) {
    throw Error(ErrorCode::schema, "min_len, max_len: min_len " + std::to_string(config.min_len) +
                                       " exceeds max_len " + std::to_string(config.max_len));
  }
  if (config.imputers.empty()) throw Error(ErrorCode::schema, "imputers: at least one imputer is required");
  if (config.bins < 2) throw Error(ErrorCode::schema, "bins: must be >= 2");
  if (!(config.epsilon > 0.0)) throw Error(ErrorCode::schema, "epsilon: must be > 0");
  for (std::size_t i = 0; i < config.imputers.size(); ++i) validate(config.imputers[i], "imputers[" + std::to_string(i) + "]");
}

/// One (gap, imputer) scoring. `error` is empty on success; otherwise the
/// metric fields are NaN.
struct MetricRecord {
  std::int64_t gap_id = 0;
  std::string imputer_id;
  std::int64_t gap_len = 0;
  double wd = 0.0;
  double jsd = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  std::string error;

  bool ok() const { return error.empty(); }
  bool operator==(const MetricRecord& o) const {
    const auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
    return gap_id == o.gap_id && imputer_id == o.imputer_id && gap_len == o.gap_len && same(wd, o.wd) &&
           same(jsd, o.jsd) && same(rmse, o.rmse) && same(mae, o.mae) && error == o.error;
  }
};

/// Means per (imputer, bucket). gap_len 0 denotes the pooled bucket.
struct AggregateRow {
  std::string imputer_id;
  std::int64_t gap_len = 0;
  double mean_wd = 0.0;
  double mean_jsd = 0.0;
  double mean_rmse = 0.0;
  double mean_mae = 0.0;
  std::size_t n = 0;
  std::size_t n_failed = 0;

  bool operator==(const AggregateRow&) const = default;
};

struct MetricAgreement {
  std::string no_gt_metric;
  std::string gt_metric;
  double spearman = 0.0;
  double kendall = 0.0;
};

struct AgreementBlock {
  std::int64_t gap_len = 0;  // 0 = pooled over all gaps
  std::vector<std::string> imputers;
  std::vector<MetricAgreement> pairs;
};

struct EvalReport {
  EvalConfig config;
  GapSet gaps;
  std::vector<std::string> imputer_ids;
  std::vector<MetricRecord> records;
  std::vector<AggregateRow> aggregates;
  std::vector<AggregateRow> pooled;
  std::vector<AgreementBlock> agreement;
  std::string prng = Rng::algorithm;
};

namespace detail {

inline std::vector<AggregateRow> aggregate_by(const std::vector<MetricRecord>& records,
                                              const std::vector<std::string>& imputer_order, bool pooled) {
  std::map<std::pair<std::int64_t, std::string>, AggregateRow> acc;
  for (const auto& r : records) {
    const std::int64_t bucket = pooled ? 0 : r.gap_len;
    auto& row = acc[{bucket, r.imputer_id}];
    row.imputer_id = r.imputer_id;
    row.gap_len = bucket;
    if (!r.ok()) {
      ++row.n_failed;
      continue;
    }
    ++row.n;
    row.mean_wd += r.wd;
    row.mean_jsd += r.jsd;
    row.mean_rmse += r.rmse;
    row.mean_mae += r.mae;
  }
  // imputer order: as configured, then any others alphabetically
  std::vector<std::string> order = imputer_order;
  for (const auto& [key, row] : acc) {
    if (std::find(order.begin(), order.end(), key.second) == order.end()) order.push_back(key.second);
  }
  std::vector<AggregateRow> out;
  for (const auto& id : order) {
    for (auto& [key, row] : acc) {
      if (key.second != id) continue;
      if (row.n > 0) {
        const auto n = static_cast<double>(row.n);
        row.mean_wd /= n;
        row.mean_jsd /= n;
        row.mean_rmse /= n;
        row.mean_mae /= n;
      } else {
        row.mean_wd = row.mean_jsd = row.mean_rmse = row.mean_mae = std::nan("");
      }
      out.push_back(row);
    }
  }
  return out;
}

}  // namespace detail

/// Arithmetic means of each metric per (imputer, exact gap length). Error
/// records only count towards n_failed; buckets without records are absent.
inline std::vector<AggregateRow> aggregate(const std::vector<MetricRecord>& records,
                                           Bucketing = Bucketing::exact_length,
                                           const std::vector<std::string>& imputer_order = {}) {
  return detail::aggregate_by(records, imputer_order, false);
}

/// Means per imputer over every gap (bucket gap_len = 0).
inline std::vector<AggregateRow> aggregate_pooled(const std::vector<MetricRecord>& records,
                                                  const std::vector<std::string>& imputer_order = {}) {
  return detail::aggregate_by(records, imputer_order, true);
}

/// Spearman and Kendall coefficients between the imputer orderings under
/// each no-ground-truth metric (wd, jsd) and each ground-truth metric (rmse,
/// mae), per bucket. Buckets with fewer than two imputers having at least
/// one successful record are skipped; if none qualifies, throws degenerate.
inline std::vector<AgreementBlock> rank_agreement(const std::vector<AggregateRow>& rows) {
  std::map<std::int64_t, std::vector<const AggregateRow*>> buckets;
  for (const auto& row : rows) {
    if (row.n > 0) buckets[row.gap_len].push_back(&row);
  }
  std::vector<AgreementBlock> out;
  for (const auto& [gap_len, members] : buckets) {
    if (members.size() < 2) continue;
    AgreementBlock block;
    block.gap_len = gap_len;
    std::vector<double> wd, jsd_v, rmse_v, mae_v;
    for (const auto* row : members) {
      block.imputers.push_back(row->imputer_id);
      wd.push_back(row->mean_wd);
      jsd_v.push_back(row->mean_jsd);
      rmse_v.push_back(row->mean_rmse);
      mae_v.push_back(row->mean_mae);
    }
    const std::pair<const char*, const std::vector<double>*> no_gt[] = {{"wd", &wd}, {"jsd", &jsd_v}};
    const std::pair<const char*, const std::vector<double>*> gt[] = {{"rmse", &rmse_v}, {"mae", &mae_v}};
    for (const auto& [a_name, a] : no_gt) {
      for (const auto& [b_name, b] : gt) {
        block.pairs.push_back({a_name, b_name, spearman(*a, *b), kendall(*a, *b)});
      }
    }
    out.push_back(std::move(block));
  }
  if (out.empty()) throw Error(ErrorCode::degenerate, "rank agreement needs at least 2 imputers with results");
  return out;
}

inline const MetricAgreement* find_agreement(const std::vector<AgreementBlock>& blocks, std::int64_t gap_len,
                                             const std::string& no_gt, const std::string& gt) {
  for (const auto& b : blocks) {
    if (b.gap_len != gap_len) continue;
    for (const auto& p : b.pairs) {
      if (p.no_gt_metric == no_gt && p.gt_metric == gt) return &p;
    }
  }
  return nullptr;
}

/// Scores one filled gap against its held-out truth and reference window.
inline MetricRecord score_gap(std::int64_t gap_id, const std::string& imputer_id, const GapSpec& gap,
                              std::span<const double> filled, std::span<const double> truth,
                              const EmpiricalSample& reference, int bins, double epsilon) {
  MetricRecord r;
  r.gap_id = gap_id;
  r.imputer_id = imputer_id;
  r.gap_len = gap.length;
  const EmpiricalSample imputed(std::vector<double>(filled.begin(), filled.end()));
  r.wd = wasserstein_1d(imputed, reference);
  r.jsd = jsd(imputed, reference, bins, epsilon);
  r.rmse = rmse(filled, truth);
  r.mae = mae(filled, truth);
  return r;
}

/// Runs every imputer on every gap of a freshly generated gap set. Failures
/// of individual (gap, imputer) jobs become error records; only gap
/// placement errors abort. Records are ordered gap-major, imputer-minor and
/// do not depend on the thread count.
inline EvalReport run_evaluation(const TimeSeries& series, const EvalConfig& config,
                                 const std::vector<const Imputer*>& imputers) {
  if (imputers.empty()) throw Error(ErrorCode::config, "at least one imputer is required");
  const auto check = validate(series);
  if (!check.ok()) throw Error(ErrorCode::invalid_argument, "invalid series: " + check.violations.front());
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!series.observed[i]) {
      throw Error(ErrorCode::invalid_argument, "evaluation needs a fully observed series; index " + std::to_string(i) +
                                                   " is missing");
    }
  }

  EvalReport report;
  report.config = config;
  report.gaps = generate_gaps(static_cast<std::int64_t>(series.size()), config.n_gaps, config.min_len, config.max_len,
                              config.seed);
  const GappedSeries gapped = apply_gaps(series, report.gaps);
  for (const auto* imp : imputers) report.imputer_ids.push_back(imp->id());

  std::vector<EmpiricalSample> references;
  references.reserve(report.gaps.gaps.size());
  for (const auto& gap : report.gaps.gaps) references.push_back(pre_gap_window(gapped.masked, gap));

  const std::size_t n_imp = imputers.size();
  const std::size_t n_jobs = report.gaps.gaps.size() * n_imp;
  report.records.resize(n_jobs);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t job = next++; job < n_jobs; job = next++) {
      const std::size_t g = job / n_imp;
      const Imputer& imp = *imputers[job % n_imp];
      const GapSpec& gap = report.gaps.gaps[g];
      MetricRecord& out = report.records[job];
      try {
        const auto result = imp.impute(gapped.masked, gap, config.seed);
        out = score_gap(static_cast<std::int64_t>(g), report.imputer_ids[job % n_imp], gap, result.filled,
                        gapped.truth[g], references[g], config.bins, config.epsilon);
      } catch (const std::exception& e) {
        out.gap_id = static_cast<std::int64_t>(g);
        out.imputer_id = report.imputer_ids[job % n_imp];
        out.gap_len = gap.length;
        out.wd = out.jsd = out.rmse = out.mae = std::nan("");
        out.error = e.what();
      }
    }
  };
  unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n_jobs, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  report.aggregates = aggregate(report.records, config.bucketing, report.imputer_ids);
  report.pooled = aggregate_pooled(report.records, report.imputer_ids);
  if (n_imp >= 2) {
    std::vector<AggregateRow> all = report.pooled;
    all.insert(all.end(), report.aggregates.begin(), report.aggregates.end());
    try {
      report.agreement = rank_agreement(all);
    } catch (const Error&) {
      // every imputer but one failed everywhere; the report still carries the records
    }
  }
  return report;
}

inline EvalReport run_evaluation(const TimeSeries& series, const EvalConfig& config) {
  validate(config);
  std::vector<std::unique_ptr<Imputer>> owned;
  std::vector<const Imputer*> imputers;
  for (const auto& c : config.imputers) {
    owned.push_back(make_imputer(c));
    imputers.push_back(owned.back().get());
  }
  return run_evaluation(series, config, imputers);
}

}  // namespace gapgauge
