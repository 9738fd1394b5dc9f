#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gapgauge/gaps.hpp"
#include "gapgauge/imputers/imputer.hpp"
#include "gapgauge/metrics.hpp"

namespace gapgauge {

/// Parameter name -> candidate values, in declaration order.
using ParameterGrid = std::vector<std::pair<std::string, std::vector<double>>>;

/// Cartesian product of the grid applied to `base`; the last parameter varies fastest.
inline std::vector<ImputerConfig> expand_grid(const ImputerConfig& base, const ParameterGrid& grid) {
  std::vector<ImputerConfig> out{base};
  for (const auto& [name, values] : grid) {
    if (values.empty()) throw Error(ErrorCode::search, "grid parameter '" + name + "' has no values");
    std::vector<ImputerConfig> next;
    next.reserve(out.size() * values.size());
    for (const auto& config : out) {
      for (double v : values) next.push_back(with_parameter(config, name, v));
    }
    out = std::move(next);
  }
  return out;
}

struct GridSearchResult {
  ImputerConfig best;
  double best_rmse = 0.0;
  std::vector<double> scores;  // NaN for failed configurations
  std::vector<std::string> failures;
};

/// Scores every configuration by mean RMSE over the validation gaps, which
/// are masked out of `masked` here. A configuration fails if any validation
/// gap fails. Ties keep the earlier configuration.
inline GridSearchResult hyperparameter_grid_search(const TimeSeries& masked, const GapSet& validation_gaps,
                                                   const ParameterGrid& grid, const ImputerConfig& base,
                                                   std::uint64_t seed = 0) {
  if (grid.empty()) throw Error(ErrorCode::search, "empty parameter grid");
  if (validation_gaps.gaps.empty()) throw Error(ErrorCode::search, "no validation gaps");
  const auto configs = expand_grid(base, grid);
  GappedSeries validation = [&] {
    try {
      return apply_gaps(masked, validation_gaps);
    } catch (const Error& e) {
      throw Error(ErrorCode::search, std::string("validation gaps unusable: ") + e.what());
    }
  }();

  GridSearchResult result{configs.front(), std::numeric_limits<double>::infinity(), {}, {}};
  bool found = false;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    try {
      double total = 0.0;
      for (std::size_t g = 0; g < validation_gaps.gaps.size(); ++g) {
        const auto filled = impute(configs[c], validation.masked, validation_gaps.gaps[g], seed);
        total += rmse(filled.filled, validation.truth[g]);
      }
      const double score = total / static_cast<double>(validation_gaps.gaps.size());
      result.scores.push_back(score);
      if (score < result.best_rmse) {
        result.best_rmse = score;
        result.best = configs[c];
        found = true;
      }
    } catch (const Error& e) {
      result.scores.push_back(std::numeric_limits<double>::quiet_NaN());
      result.failures.push_back("config " + std::to_string(c) + " (" + imputer_id(configs[c]) + "): " + e.what());
    }
  }
  if (!found) {
    std::string causes;
    for (const auto& f : result.failures) causes += "; " + f;
    throw Error(ErrorCode::search, "every configuration failed" + causes);
  }
  return result;
}

}  // namespace gapgauge
