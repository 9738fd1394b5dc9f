#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gapgauge/imputers/result.hpp"

namespace gapgauge {

struct SeasonalNaiveParams {
  std::int64_t season = 24;
};

/// Fills each gap position with the nearest observed value a whole number of
/// seasons earlier.
inline ImputationResult impute_seasonal_naive(const TimeSeries& masked, const GapSpec& gap, std::int64_t season) {
  detail::check_gap_bounds(masked, gap);
  if (season < 1) throw Error(ErrorCode::invalid_argument, "season must be at least 1");
  std::vector<double> filled;
  filled.reserve(static_cast<std::size_t>(gap.length));
  for (auto i = gap.start_index; i < gap.end_index(); ++i) {
    auto j = i - season;
    while (j >= 0 && !masked.observed[static_cast<std::size_t>(j)]) j -= season;
    if (j < 0) {
      throw Error(ErrorCode::seasonal_reference, "no observed value a whole season (" + std::to_string(season) +
                                                     ") before index " + std::to_string(i));
    }
    filled.push_back(masked.values[static_cast<std::size_t>(j)]);
  }
  return detail::finish("seasonal_naive", gap, std::move(filled));
}

}  // namespace gapgauge
