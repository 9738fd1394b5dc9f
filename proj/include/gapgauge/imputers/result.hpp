#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "gapgauge/error.hpp"
#include "gapgauge/gaps.hpp"

namespace gapgauge {

struct ImputationResult {
  std::string imputer_id;
  GapSpec gap;
  std::vector<double> filled;
};

namespace detail {

inline ImputationResult finish(std::string id, const GapSpec& gap, std::vector<double> filled) {
  if (filled.size() != static_cast<std::size_t>(gap.length)) {
    throw Error(ErrorCode::shape, id + " produced " + std::to_string(filled.size()) + " values for a gap of " +
                                      std::to_string(gap.length));
  }
  for (double v : filled) {
    if (!std::isfinite(v)) throw Error(ErrorCode::divergence, id + " produced a non-finite fill value");
  }
  return {std::move(id), gap, std::move(filled)};
}

inline void check_gap_bounds(const TimeSeries& series, const GapSpec& gap) {
  if (gap.length < 1 || gap.start_index < 0 || gap.end_index() > static_cast<std::int64_t>(series.size())) {
    throw Error(ErrorCode::range, "gap [" + std::to_string(gap.start_index) + ", " + std::to_string(gap.end_index()) +
                                      ") does not fit a series of length " + std::to_string(series.size()));
  }
}

}  // namespace detail
}  // namespace gapgauge
