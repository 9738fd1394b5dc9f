#include <cmath>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "gapgauge/gaps.hpp"
#include "gapgauge/imputers/seasonal_naive.hpp"

namespace gg = gapgauge;
using gg::ErrorCode;

namespace {

gg::TimeSeries periodic(std::size_t n, std::size_t period) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = static_cast<double>(i % period) / static_cast<double>(period);
    v[i] = 100.0 + 30.0 * std::sin(6.283185307179586 * phase) + static_cast<double>((i % period) * (i % period) % 7);
  }
  return gg::TimeSeries::fully_observed(0, 3600, v);
}

}  // namespace

TEST(SeasonalNaive, ExactOnPeriodicSignals) {
  for (std::size_t period : {5u, 24u, 168u}) {
    const auto truth = periodic(2000, period);
    const auto set = gg::generate_gaps(2000, 10, 1, 60, period);
    const auto gapped = gg::apply_gaps(truth, set);
    for (std::size_t g = 0; g < set.gaps.size(); ++g) {
      const auto& gap = set.gaps[g];
      if (gap.start_index < static_cast<std::int64_t>(period)) continue;
      const auto r = gg::impute_seasonal_naive(gapped.masked, gap, static_cast<std::int64_t>(period));
      EXPECT_EQ(r.filled, gapped.truth[g]) << "period " << period << " gap " << g;
    }
  }
}

TEST(SeasonalNaive, GapLongerThanSeasonReachesFurtherBack) {
  const auto truth = periodic(200, 24);
  auto masked = truth;
  const gg::GapSpec gap{100, 60};
  for (auto i = gap.start_index; i < gap.end_index(); ++i) masked.observed[static_cast<std::size_t>(i)] = false;
  const auto r = gg::impute_seasonal_naive(masked, gap, 24);
  for (std::int64_t k = 0; k < gap.length; ++k) {
    EXPECT_EQ(r.filled[static_cast<std::size_t>(k)], truth.values[static_cast<std::size_t>(gap.start_index + k)]);
  }
}

TEST(SeasonalNaive, ConstantSeries) {
  auto s = gg::TimeSeries::fully_observed(0, 3600, std::vector<double>(100, 3.25));
  const gg::GapSpec gap{50, 10};
  for (int i = 50; i < 60; ++i) s.observed[static_cast<std::size_t>(i)] = false;
  EXPECT_EQ(gg::impute_seasonal_naive(s, gap, 24).filled, std::vector<double>(10, 3.25));
}

TEST(SeasonalNaive, NoSeasonalAncestor) {
  auto s = periodic(100, 24);
  const gg::GapSpec gap{10, 5};
  for (int i = 10; i < 15; ++i) s.observed[static_cast<std::size_t>(i)] = false;
  GG_EXPECT_ERROR(gg::impute_seasonal_naive(s, gap, 24), ErrorCode::seasonal_reference);
}
