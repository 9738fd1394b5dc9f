#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gapgauge/error.hpp"

namespace gapgauge {

/// Regularly sampled univariate series with an explicit observation mask.
/// Sample i is taken at start_time + i * step. A position whose mask entry is
/// false carries no meaningful value.
struct TimeSeries {
  std::int64_t start_time = 0;  // epoch seconds
  std::int64_t step = 3600;     // seconds per sample
  std::vector<double> values;
  std::vector<bool> observed;

  static TimeSeries fully_observed(std::int64_t start_time, std::int64_t step,
                                   std::vector<double> values) {
    TimeSeries s{start_time, step, std::move(values), {}};
    s.observed.assign(s.values.size(), true);
    return s;
  }

  std::size_t size() const { return values.size(); }
  std::int64_t time_at(std::size_t i) const {
    return start_time + static_cast<std::int64_t>(i) * step;
  }
  bool is_observed(std::size_t i) const { return observed[i]; }

  bool operator==(const TimeSeries&) const = default;
};

/// Unordered bag of finite reals standing for an empirical distribution.
class EmpiricalSample {
 public:
  explicit EmpiricalSample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorCode::empty_sample, "empirical sample has no values");
    for (double v : values_) {
      if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "empirical sample holds a non-finite value");
    }
  }

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

inline ValidationReport validate(const TimeSeries& series) {
  ValidationReport report;
  if (series.step <= 0) report.violations.emplace_back("non-positive step");
  if (series.values.size() != series.observed.size()) report.violations.emplace_back("length mismatch");
  if (series.values.empty()) report.violations.emplace_back("empty series");
  const std::size_t n = std::min(series.values.size(), series.observed.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (series.observed[i] && !std::isfinite(series.values[i])) {
      report.violations.emplace_back("non-finite observed value at index " + std::to_string(i));
      break;
    }
  }
  return report;
}

namespace detail {

inline void check_window(const TimeSeries& series, std::int64_t start_index, std::int64_t length) {
  if (start_index < 0) {
    throw Error(ErrorCode::range, "start_index " + std::to_string(start_index) + " is negative");
  }
  if (length < 1) {
    throw Error(ErrorCode::range, "length " + std::to_string(length) + " is below 1");
  }
  const auto n = static_cast<std::int64_t>(series.size());
  if (start_index + length > n) {
    throw Error(ErrorCode::range, "end index " + std::to_string(start_index + length) +
                                      " exceeds series length " + std::to_string(n));
  }
}

}  // namespace detail

inline TimeSeries slice(const TimeSeries& series, std::int64_t start_index, std::int64_t length) {
  detail::check_window(series, start_index, length);
  const auto first = static_cast<std::size_t>(start_index);
  const auto last = first + static_cast<std::size_t>(length);
  TimeSeries out;
  out.start_time = series.start_time + start_index * series.step;
  out.step = series.step;
  out.values.assign(series.values.begin() + static_cast<std::ptrdiff_t>(first),
                    series.values.begin() + static_cast<std::ptrdiff_t>(last));
  out.observed.assign(series.observed.begin() + static_cast<std::ptrdiff_t>(first),
                      series.observed.begin() + static_cast<std::ptrdiff_t>(last));
  return out;
}

/// Values at observed positions of the window, in index order.
inline EmpiricalSample observed_values(const TimeSeries& series, std::int64_t start_index,
                                       std::int64_t length) {
  detail::check_window(series, start_index, length);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(length));
  for (auto i = static_cast<std::size_t>(start_index); i < static_cast<std::size_t>(start_index + length); ++i) {
    if (series.observed[i]) out.push_back(series.values[i]);
  }
  if (out.empty()) {
    throw Error(ErrorCode::empty_sample, "window [" + std::to_string(start_index) + ", " +
                                             std::to_string(start_index + length) + ") has no observed values");
  }
  return EmpiricalSample(std::move(out));
}

}  // namespace gapgauge
