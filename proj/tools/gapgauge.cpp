// gapgauge command-line front end: ingest | synth | run | agree.
//
// Exit status: 0 success, 1 configuration or ingest error, 2 run-aborting
// evaluation error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gapgauge/gapgauge.hpp"
#include "gapgauge/io/config.hpp"
#include "gapgauge/io/ingest.hpp"
#include "gapgauge/io/report.hpp"

namespace {

using gapgauge::Error;
namespace io = gapgauge::io;

constexpr int exit_config = 1;
constexpr int exit_run = 2;
constexpr std::uint64_t default_seed = 7;

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("GAPGAUGE_SEED");
  if (!raw || !*raw) return std::nullopt;
  std::uint64_t seed = 0;
  if (!io::parse_int(std::string_view(raw), seed)) {
    throw Error(gapgauge::ErrorCode::config, "GAPGAUGE_SEED is not an unsigned integer: '" + std::string(raw) + "'");
  }
  return seed;
}

void report_error(const std::exception& e) { std::cerr << "gapgauge: error: " << e.what() << "\n"; }

struct IngestFlags {
  std::string time_col;
  std::string value_col;
  std::string time_format;
  std::int64_t step = 0;
  std::string missing;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--time-col", time_col, "Timestamp column name");
    cmd->add_option("--value-col", value_col, "Value column name");
    cmd->add_option("--time-format", time_format, "epoch | iso8601")->check(CLI::IsMember({"epoch", "iso8601"}));
    cmd->add_option("--step", step, "Expected sampling step in seconds");
    cmd->add_option("--missing", missing, "reject | mask")->check(CLI::IsMember({"reject", "mask"}));
  }

  void apply(io::IngestSpec& spec) const {
    if (!time_col.empty()) spec.timestamp_column = time_col;
    if (!value_col.empty()) spec.value_column = value_col;
    if (!time_format.empty()) {
      spec.timestamp_format = time_format == "epoch" ? io::TimestampFormat::epoch_seconds : io::TimestampFormat::iso8601;
    }
    if (step > 0) spec.expected_step = step;
    if (!missing.empty()) spec.missing_policy = missing == "mask" ? io::MissingPolicy::mask : io::MissingPolicy::reject;
  }
};

std::vector<std::string> split_list(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void print_summary(const gapgauge::EvalReport& report) {
  std::size_t failed = 0;
  for (const auto& r : report.records) failed += r.ok() ? 0 : 1;
  std::cout << "gaps: " << report.gaps.gaps.size() << "  records: " << report.records.size() << "  failed: " << failed
            << "  seed: " << report.config.seed << " (" << report.prng << ")\n";
  std::cout << "imputer                    mean_wd    mean_jsd   mean_rmse  mean_mae   n    failed\n";
  for (const auto& a : report.pooled) {
    std::printf("%-26s %-10.4g %-10.4g %-10.4g %-10.4g %-4zu %zu\n", a.imputer_id.c_str(), a.mean_wd, a.mean_jsd,
                a.mean_rmse, a.mean_mae, a.n, a.n_failed);
  }
  for (const char* no_gt : {"wd", "jsd"}) {
    for (const char* gt : {"rmse", "mae"}) {
      if (const auto* p = gapgauge::find_agreement(report.agreement, 0, no_gt, gt)) {
        std::printf("agreement %s vs %s: spearman %.3f kendall %.3f\n", no_gt, gt, p->spearman, p->kendall);
      }
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate time-series gap imputation with and without ground truth"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate a CSV series and print a summary");
  std::string series_path;
  std::string config_path;
  IngestFlags ingest_flags;
  ingest->add_option("--series", series_path, "Input CSV")->required();
  ingest->add_option("--config", config_path, "Run configuration supplying the series block");
  ingest_flags.add_to(ingest);

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic series as CSV");
  std::string synth_kind = "seasonal";
  std::int64_t synth_length = 20'000;
  std::optional<std::uint64_t> seed_flag;
  std::string out_path;
  gapgauge::SynthParams synth_params;
  synth->add_option("--kind", synth_kind, "seasonal | ar1 | constant | sine")
      ->check(CLI::IsMember({"seasonal", "ar1", "constant", "sine", "sine+noise"}));
  synth->add_option("--length", synth_length, "Number of samples");
  synth->add_option("--seed", seed_flag, "RNG seed");
  synth->add_option("--out", out_path, "Output CSV path")->required();
  synth->add_option("--step", synth_params.step, "Seconds per sample");
  synth->add_option("--start", synth_params.start_time, "Epoch seconds of the first sample");
  synth->add_option("--level", synth_params.level, "seasonal: base level");
  synth->add_option("--daily", synth_params.daily_amplitude, "seasonal: daily amplitude");
  synth->add_option("--weekly", synth_params.weekly_amplitude, "seasonal: weekly amplitude");
  synth->add_option("--noise", synth_params.noise_sd, "Noise standard deviation");
  synth->add_option("--coef", synth_params.coefficient, "ar1: coefficient");
  synth->add_option("--mean", synth_params.mean, "ar1: mean");
  synth->add_option("--amplitude", synth_params.amplitude, "sine: amplitude");
  synth->add_option("--period", synth_params.period, "sine: period in samples");
  synth->add_option("--value", synth_params.value, "constant: value");

  // run
  auto* run = app.add_subcommand("run", "Run the full evaluation");
  std::string out_dir;
  std::string imputer_filter;
  std::optional<int> bins_flag;
  std::optional<unsigned> threads_flag;
  bool quiet = false;
  run->add_option("--config", config_path, "Run configuration JSON")->required();
  run->add_option("--series", series_path, "Input CSV")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed_flag, "RNG seed (overrides config and GAPGAUGE_SEED)");
  run->add_option("--imputers", imputer_filter, "Comma-separated kinds or ids to keep");
  run->add_option("--bins", bins_flag, "Histogram bins for JSD");
  run->add_option("--threads", threads_flag, "Worker threads (0 = all cores)");
  run->add_flag("--quiet", quiet, "Suppress the summary");

  // agree
  auto* agree = app.add_subcommand("agree", "Recompute aggregates and rank agreement from records.csv");
  std::string records_path;
  agree->add_option("--records", records_path, "records.csv from a previous run")->required();
  agree->add_option("--out", out_dir, "Also write aggregates.csv and agreement.json here");

  CLI11_PARSE(app, argc, argv);

  if (*ingest) {
    try {
      io::IngestSpec spec;
      if (!config_path.empty()) spec = io::load_config(config_path).series;
      ingest_flags.apply(spec);
      spec.path = series_path;
      const auto series = io::ingest_csv(spec);
      std::size_t observed = 0;
      for (bool o : series.observed) observed += o ? 1 : 0;
      nlohmann::ordered_json j;
      j["path"] = series_path;
      j["length"] = series.size();
      j["observed"] = observed;
      j["masked"] = series.size() - observed;
      j["start_time"] = series.start_time;
      j["step"] = series.step;
      std::cout << j.dump(2) << "\n";
      return 0;
    } catch (const std::exception& e) {
      report_error(e);
      return exit_config;
    }
  }

  if (*synth) {
    try {
      const auto seed = seed_flag ? *seed_flag : env_seed().value_or(default_seed);
      const auto series = gapgauge::synthesize_series(gapgauge::parse_synth_kind(synth_kind), synth_length, synth_params, seed);
      io::write_file_atomic(out_path, io::series_to_csv(series));
      return 0;
    } catch (const std::exception& e) {
      report_error(e);
      return exit_config;
    }
  }

  if (*run) {
    io::RunConfig config;
    gapgauge::TimeSeries series;
    try {
      config = io::load_config(config_path);
      if (seed_flag) {
        config.eval.seed = *seed_flag;
      } else if (!config.seed) {
        config.eval.seed = env_seed().value_or(default_seed);
      }
      if (bins_flag) config.eval.bins = *bins_flag;
      if (threads_flag) config.eval.threads = *threads_flag;
      if (!imputer_filter.empty()) {
        const auto keep = split_list(imputer_filter);
        std::vector<gapgauge::ImputerConfig> kept;
        for (const auto& imp : config.eval.imputers) {
          const std::string kind(gapgauge::to_string(imp.kind));
          const std::string id = gapgauge::imputer_id(imp);
          if (std::find(keep.begin(), keep.end(), kind) != keep.end() ||
              std::find(keep.begin(), keep.end(), id) != keep.end()) {
            kept.push_back(imp);
          }
        }
        config.eval.imputers = std::move(kept);
      }
      gapgauge::validate(config.eval);
      config.series.path = series_path;
      series = io::ingest_csv(config.series);
    } catch (const std::exception& e) {
      report_error(e);
      return exit_config;
    }
    try {
      const auto report = gapgauge::run_evaluation(series, config.eval);
      io::emit_report(report, out_dir);
      if (!quiet) print_summary(report);
      return 0;
    } catch (const std::exception& e) {
      report_error(e);
      return exit_run;
    }
  }

  if (*agree) {
    std::vector<gapgauge::MetricRecord> records;
    try {
      records = io::records_from_csv(io::read_file(records_path), records_path);
    } catch (const std::exception& e) {
      report_error(e);
      return exit_config;
    }
    try {
      std::vector<std::string> order;
      for (const auto& r : records) {
        if (std::find(order.begin(), order.end(), r.imputer_id) == order.end()) order.push_back(r.imputer_id);
      }
      const auto per_len = gapgauge::aggregate(records, gapgauge::Bucketing::exact_length, order);
      auto all = gapgauge::aggregate_pooled(records, order);
      all.insert(all.end(), per_len.begin(), per_len.end());
      const auto agreement = io::agreement_to_json(gapgauge::rank_agreement(all));
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        io::write_file_atomic(std::filesystem::path(out_dir) / "aggregates.csv", io::aggregates_to_csv(per_len));
        io::write_file_atomic(std::filesystem::path(out_dir) / "agreement.json", agreement.dump(2) + "\n");
      }
      std::cout << agreement.dump(2) << "\n";
      return 0;
    } catch (const std::exception& e) {
      report_error(e);
      return exit_run;
    }
  }
  return 0;
}
