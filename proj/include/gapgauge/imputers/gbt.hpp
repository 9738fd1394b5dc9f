#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gapgauge/imputers/result.hpp"
#include "gapgauge/random.hpp"

namespace gapgauge {

struct GbtParams {
  int trees = 100;
  int max_depth = 4;
  double learning_rate = 0.1;
  double subsample = 1.0;

  bool operator==(const GbtParams&) const = default;
};

struct FeatureParams {
  std::int64_t sma_window = 24;
  double ewma_alpha = 0.3;
  bool use_sma = true;
  bool use_ewma = true;
  bool use_hour = true;

  bool operator==(const FeatureParams&) const = default;
};

struct FeatureRow {
  double sma = 0.0;
  double ewma = 0.0;
  int hour_of_day = 0;
};

inline int hour_of_day(std::int64_t epoch_seconds) {
  constexpr std::int64_t day = 86'400;
  return static_cast<int>((((epoch_seconds % day) + day) % day) / 3600);
}

/// Running SMA / EWMA over the values seen so far. Missing positions occupy
/// a slot of the SMA window but contribute nothing; the EWMA skips them.
class FeatureTracker {
 public:
  explicit FeatureTracker(const FeatureParams& params)
      : params_(params), window_(static_cast<std::size_t>(params.sma_window)) {}

  /// Features for the next position, if enough history has been seen.
  std::optional<FeatureRow> features(std::int64_t epoch_seconds) const {
    if (present_ == 0 || !has_ewma_) return std::nullopt;
    return FeatureRow{sum_ / static_cast<double>(present_), ewma_, hour_of_day(epoch_seconds)};
  }

  void push(std::optional<double> value) {
    auto& slot = window_[head_];
    if (slot) {
      sum_ -= *slot;
      --present_;
    }
    slot = value;
    if (value) {
      sum_ += *value;
      ++present_;
      ewma_ = has_ewma_ ? params_.ewma_alpha * *value + (1.0 - params_.ewma_alpha) * ewma_ : *value;
      has_ewma_ = true;
    }
    head_ = (head_ + 1) % window_.size();
    // periodic exact recomputation bounds drift from the running sum
    if (head_ == 0) {
      sum_ = 0.0;
      for (const auto& v : window_) {
        if (v) sum_ += *v;
      }
    }
  }

 private:
  FeatureParams params_;
  std::vector<std::optional<double>> window_;
  std::size_t head_ = 0;
  double sum_ = 0.0;
  std::size_t present_ = 0;
  double ewma_ = 0.0;
  bool has_ewma_ = false;
};

/// Dense row-major feature matrix.
struct FeatureMatrix {
  std::size_t cols = 0;
  std::vector<double> data;

  std::size_t rows() const { return cols == 0 ? 0 : data.size() / cols; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  void push_row(std::span<const double> row) { data.insert(data.end(), row.begin(), row.end()); }
};

inline std::vector<double> encode(const FeatureRow& f, const FeatureParams& params) {
  std::vector<double> out;
  if (params.use_sma) out.push_back(f.sma);
  if (params.use_ewma) out.push_back(f.ewma);
  if (params.use_hour) out.push_back(static_cast<double>(f.hour_of_day));
  return out;
}

/// Least-squares regression tree. Internal nodes send x to the left child
/// when x[feature] <= threshold; leaves hold the mean target of their rows.
class RegressionTree {
 public:
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };

  double predict(std::span<const double> x) const {
    int k = 0;
    while (nodes_[static_cast<std::size_t>(k)].feature >= 0) {
      const auto& n = nodes_[static_cast<std::size_t>(k)];
      k = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes_[static_cast<std::size_t>(k)].value;
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  std::vector<Node>& nodes() { return nodes_; }

 private:
  std::vector<Node> nodes_;
};

namespace detail {

/// Candidate thresholds per feature: every distinct value when there are at
/// most 256 of them, otherwise 256 quantiles. A row's bin is the index of the
/// first threshold >= its value, so "bin <= b" equals "value <= cuts[b]".
struct BinnedFeatures {
  std::vector<std::vector<double>> cuts;
  std::vector<std::vector<std::uint16_t>> bins;  // [feature][row]

  explicit BinnedFeatures(const FeatureMatrix& X) {
    constexpr std::size_t max_bins = 256;
    const std::size_t n = X.rows();
    cuts.resize(X.cols);
    bins.resize(X.cols);
    for (std::size_t c = 0; c < X.cols; ++c) {
      std::vector<double> sorted(n);
      for (std::size_t r = 0; r < n; ++r) sorted[r] = X.at(r, c);
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      if (sorted.size() <= max_bins) {
        cuts[c] = sorted;
      } else {
        for (std::size_t k = 1; k <= max_bins; ++k) {
          cuts[c].push_back(sorted[(k * sorted.size()) / max_bins - 1]);
        }
        cuts[c].erase(std::unique(cuts[c].begin(), cuts[c].end()), cuts[c].end());
      }
      bins[c].resize(n);
      for (std::size_t r = 0; r < n; ++r) {
        const auto it = std::lower_bound(cuts[c].begin(), cuts[c].end(), X.at(r, c));
        bins[c][r] = static_cast<std::uint16_t>(it - cuts[c].begin());
      }
    }
  }
};

struct SplitSearch {
  const BinnedFeatures& binned;
  const std::vector<double>& target;
  int max_depth;
  RegressionTree tree;

  int grow(std::vector<std::size_t>& rows, std::size_t begin, std::size_t end, int depth) {
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += target[rows[i]];
    const double count = static_cast<double>(end - begin);
    const int index = static_cast<int>(tree.nodes().size());
    tree.nodes().push_back({-1, 0.0, -1, -1, sum / count});
    if (depth >= max_depth || end - begin < 2) return index;

    const double parent_score = sum * sum / count;
    double best_gain = 1e-12 * std::max(1.0, parent_score);
    int best_feature = -1;
    std::size_t best_bin = 0;
    for (std::size_t f = 0; f < binned.cuts.size(); ++f) {
      const std::size_t nb = binned.cuts[f].size();
      if (nb < 2) continue;
      std::vector<double> bin_sum(nb, 0.0);
      std::vector<std::size_t> bin_count(nb, 0);
      for (std::size_t i = begin; i < end; ++i) {
        const auto b = binned.bins[f][rows[i]];
        bin_sum[b] += target[rows[i]];
        ++bin_count[b];
      }
      double left_sum = 0.0;
      std::size_t left_count = 0;
      for (std::size_t b = 0; b + 1 < nb; ++b) {
        left_sum += bin_sum[b];
        left_count += bin_count[b];
        const std::size_t right_count = (end - begin) - left_count;
        if (left_count == 0 || right_count == 0) continue;
        const double right_sum = sum - left_sum;
        const double gain = left_sum * left_sum / static_cast<double>(left_count) +
                            right_sum * right_sum / static_cast<double>(right_count) - parent_score;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_bin = b;
        }
      }
    }
    if (best_feature < 0) return index;

    const auto& feature_bins = binned.bins[static_cast<std::size_t>(best_feature)];
    const auto mid = std::stable_partition(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                                           rows.begin() + static_cast<std::ptrdiff_t>(end),
                                           [&](std::size_t r) { return feature_bins[r] <= best_bin; });
    const auto split = static_cast<std::size_t>(mid - rows.begin());
    const int left = grow(rows, begin, split, depth + 1);
    const int right = grow(rows, split, end, depth + 1);
    auto& node = tree.nodes()[static_cast<std::size_t>(index)];
    node.feature = best_feature;
    node.threshold = binned.cuts[static_cast<std::size_t>(best_feature)][best_bin];
    node.left = left;
    node.right = right;
    return index;
  }
};

}  // namespace detail

inline RegressionTree fit_regression_tree(const FeatureMatrix& X, const std::vector<double>& target, int max_depth,
                                          std::vector<std::size_t> rows) {
  detail::BinnedFeatures binned(X);
  detail::SplitSearch search{binned, target, max_depth, {}};
  search.grow(rows, 0, rows.size(), 0);
  return std::move(search.tree);
}

inline RegressionTree fit_regression_tree(const FeatureMatrix& X, const std::vector<double>& target, int max_depth) {
  std::vector<std::size_t> rows(X.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return fit_regression_tree(X, target, max_depth, std::move(rows));
}

inline void validate(const GbtParams& p) {
  if (p.trees < 1) throw Error(ErrorCode::invalid_argument, "trees must be at least 1");
  if (p.max_depth < 1) throw Error(ErrorCode::invalid_argument, "max_depth must be at least 1");
  if (!(p.learning_rate > 0.0 && p.learning_rate <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "learning_rate must lie in (0, 1]");
  }
  if (!(p.subsample > 0.0 && p.subsample <= 1.0)) throw Error(ErrorCode::invalid_argument, "subsample must lie in (0, 1]");
}

inline void validate(const FeatureParams& p) {
  if (p.sma_window < 1) throw Error(ErrorCode::invalid_argument, "sma_window must be at least 1");
  if (!(p.ewma_alpha > 0.0 && p.ewma_alpha <= 1.0)) throw Error(ErrorCode::invalid_argument, "ewma_alpha must lie in (0, 1]");
}

/// Least-squares gradient boosting: the model starts at the target mean and
/// each tree fits the current residuals on a row subsample.
class GradientBoostedTrees {
 public:
  /// `loss_curve`, when given, receives the training MSE after 0, 1, ..., trees trees.
  static GradientBoostedTrees fit(const FeatureMatrix& X, const std::vector<double>& y, const GbtParams& params,
                                  std::uint64_t seed, std::vector<double>* loss_curve = nullptr) {
    validate(params);
    if (X.rows() == 0 || X.rows() != y.size()) throw Error(ErrorCode::training, "empty or misaligned training set");
    const std::size_t n = y.size();

    GradientBoostedTrees model;
    model.learning_rate_ = params.learning_rate;
    model.base_ = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);

    detail::BinnedFeatures binned(X);
    std::vector<double> prediction(n, model.base_);
    std::vector<double> residual(n);
    const auto record_loss = [&] {
      if (!loss_curve) return;
      double sse = 0.0;
      for (std::size_t i = 0; i < n; ++i) sse += (y[i] - prediction[i]) * (y[i] - prediction[i]);
      loss_curve->push_back(sse / static_cast<double>(n));
    };
    record_loss();

    Rng rng(seed);
    const auto sample_size = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(params.subsample * static_cast<double>(n))));
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (int t = 0; t < params.trees; ++t) {
      for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - prediction[i];
      std::vector<std::size_t> rows = all;
      if (sample_size < n) {
        for (std::size_t i = 0; i < sample_size; ++i) {
          const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n - 1)));
          std::swap(rows[i], rows[j]);
        }
        rows.resize(sample_size);
        std::sort(rows.begin(), rows.end());
      }
      detail::SplitSearch search{binned, residual, params.max_depth, {}};
      search.grow(rows, 0, rows.size(), 0);
      model.trees_.push_back(std::move(search.tree));
      const auto& tree = model.trees_.back();
      std::vector<double> x(X.cols);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < X.cols; ++c) x[c] = X.at(i, c);
        prediction[i] += params.learning_rate * tree.predict(x);
      }
      record_loss();
    }
    return model;
  }

  double predict(std::span<const double> x) const {
    double out = base_;
    for (const auto& tree : trees_) out += learning_rate_ * tree.predict(x);
    return out;
  }

  double base() const { return base_; }
  const std::vector<RegressionTree>& trees() const { return trees_; }

 private:
  double base_ = 0.0;
  double learning_rate_ = 1.0;
  std::vector<RegressionTree> trees_;
};

struct GbtImputerParams {
  /// Samples of history before the gap (one year hourly).
  std::int64_t train_span = 365 * 24;
  GbtParams gbt;
  FeatureParams features;

  bool operator==(const GbtImputerParams&) const = default;
};

/// Trains boosted trees mapping (SMA, EWMA, hour of day) to the value on the
/// observed history before the gap, then fills the gap one step at a time,
/// feeding each prediction back into the SMA/EWMA state.
inline ImputationResult impute_gbt(const TimeSeries& masked, const GapSpec& gap, const GbtImputerParams& params,
                                   std::uint64_t seed) {
  detail::check_gap_bounds(masked, gap);
  validate(params.gbt);
  validate(params.features);
  if (!params.features.use_sma && !params.features.use_ewma && !params.features.use_hour) {
    throw Error(ErrorCode::invalid_argument, "at least one feature must be enabled");
  }
  if (params.train_span < 1) throw Error(ErrorCode::invalid_argument, "train_span must be positive");

  const std::int64_t begin = std::max<std::int64_t>(0, gap.start_index - params.train_span);
  FeatureTracker tracker(params.features);
  FeatureMatrix X;
  X.cols = encode(FeatureRow{}, params.features).size();
  std::vector<double> y;
  for (auto t = begin; t < gap.start_index; ++t) {
    const auto idx = static_cast<std::size_t>(t);
    if (masked.observed[idx]) {
      if (const auto f = tracker.features(masked.time_at(idx))) {
        X.push_row(encode(*f, params.features));
        y.push_back(masked.values[idx]);
      }
      tracker.push(masked.values[idx]);
    } else {
      tracker.push(std::nullopt);
    }
  }
  if (y.empty()) {
    throw Error(ErrorCode::training, "no observed training rows in the " + std::to_string(gap.start_index - begin) +
                                         " samples before the gap at " + std::to_string(gap.start_index));
  }

  const auto model = GradientBoostedTrees::fit(X, y, params.gbt, seed);
  std::vector<double> filled;
  filled.reserve(static_cast<std::size_t>(gap.length));
  for (auto t = gap.start_index; t < gap.end_index(); ++t) {
    const auto f = tracker.features(masked.time_at(static_cast<std::size_t>(t)));
    if (!f) throw Error(ErrorCode::training, "feature history unavailable at index " + std::to_string(t));
    const double value = model.predict(encode(*f, params.features));
    if (!std::isfinite(value)) throw Error(ErrorCode::divergence, "non-finite GBT prediction at index " + std::to_string(t));
    filled.push_back(value);
    tracker.push(value);
  }
  return detail::finish("gbt", gap, std::move(filled));
}

}  // namespace gapgauge
