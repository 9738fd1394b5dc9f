#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gapgauge/detail/least_squares.hpp"
#include "gapgauge/imputers/result.hpp"

namespace gapgauge {

struct PolynomialParams {
  int order = 3;
  /// Samples of context per side; 0 selects max(2 * gap length, 4).
  std::int64_t context = 0;
};

inline std::int64_t default_polynomial_context(const GapSpec& gap) {
  return std::max<std::int64_t>(2 * gap.length, 4);
}

/// Fits one least-squares polynomial through the observed points within
/// `context` samples on each side of the gap and evaluates it at the gap
/// indices. A gap touching the series end extrapolates from the left side.
inline ImputationResult impute_polynomial(const TimeSeries& masked, const GapSpec& gap, int order,
                                          std::int64_t context) {
  detail::check_gap_bounds(masked, gap);
  if (order < 1) throw Error(ErrorCode::invalid_argument, "polynomial order must be at least 1");
  if (context < 1) throw Error(ErrorCode::invalid_argument, "polynomial context must be at least 1");

  const auto n = static_cast<std::int64_t>(masked.size());
  std::vector<std::int64_t> left;
  std::vector<std::int64_t> right;
  for (auto i = std::max<std::int64_t>(0, gap.start_index - context); i < gap.start_index; ++i) {
    if (masked.observed[static_cast<std::size_t>(i)]) left.push_back(i);
  }
  for (auto i = gap.end_index(); i < std::min(n, gap.end_index() + context); ++i) {
    if (masked.observed[static_cast<std::size_t>(i)]) right.push_back(i);
  }
  const auto needed = static_cast<std::size_t>(order) + 1;
  const bool right_absent = gap.end_index() >= n;
  if (left.size() < needed || (!right_absent && right.size() < needed)) {
    throw Error(ErrorCode::context, "polynomial order " + std::to_string(order) + " needs " + std::to_string(needed) +
                                        " observed points per side, found " + std::to_string(left.size()) + " left and " +
                                        std::to_string(right.size()) + " right");
  }

  // centred, scaled abscissa keeps the Vandermonde matrix well conditioned
  const double centre = static_cast<double>(gap.start_index) + 0.5 * static_cast<double>(gap.length - 1);
  const double scale = static_cast<double>(context) + 0.5 * static_cast<double>(gap.length);
  const auto abscissa = [&](std::int64_t i) { return (static_cast<double>(i) - centre) / scale; };

  std::vector<std::int64_t> points = left;
  points.insert(points.end(), right.begin(), right.end());
  const auto rows = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(rows, order + 1);
  Eigen::VectorXd target(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double x = abscissa(points[static_cast<std::size_t>(r)]);
    double power = 1.0;
    for (int k = 0; k <= order; ++k) {
      design(r, k) = power;
      power *= x;
    }
    target(r) = masked.values[static_cast<std::size_t>(points[static_cast<std::size_t>(r)])];
  }
  const auto fit = detail::least_squares(design, target, "polynomial fit");

  std::vector<double> filled;
  filled.reserve(static_cast<std::size_t>(gap.length));
  for (auto i = gap.start_index; i < gap.end_index(); ++i) {
    const double x = abscissa(i);
    double value = 0.0;
    for (int k = order; k >= 0; --k) value = value * x + fit.coef(k);
    filled.push_back(value);
  }
  return detail::finish("polynomial", gap, std::move(filled));
}

inline ImputationResult impute_polynomial(const TimeSeries& masked, const GapSpec& gap,
                                          const PolynomialParams& params = {}) {
  const auto context = params.context > 0 ? params.context : default_polynomial_context(gap);
  return impute_polynomial(masked, gap, params.order, context);
}

}  // namespace gapgauge
