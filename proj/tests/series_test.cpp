#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "gapgauge/series.hpp"

namespace gg = gapgauge;
using gg::ErrorCode;

namespace {

gg::TimeSeries ten_points() {
  std::vector<double> v(10);
  for (int i = 0; i < 10; ++i) v[static_cast<std::size_t>(i)] = i + 1;
  return gg::TimeSeries::fully_observed(1'000'000, 3600, v);
}

std::vector<double> sample_values(const gg::EmpiricalSample& s) { return {s.values().begin(), s.values().end()}; }

}  // namespace

TEST(Validate, HourlyObservedSeriesIsOk) { EXPECT_TRUE(gg::validate(ten_points()).ok()); }

TEST(Validate, ZeroStep) {
  auto s = ten_points();
  s.step = 0;
  const auto report = gg::validate(s);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0], "non-positive step");
}

TEST(Validate, MaskLengthMismatch) {
  auto s = ten_points();
  s.observed.pop_back();
  const auto report = gg::validate(s);
  ASSERT_FALSE(report.ok());
  EXPECT_EQ(report.violations[0], "length mismatch");
}

TEST(Validate, ReportsEveryViolation) {
  gg::TimeSeries s;
  s.step = -5;
  s.observed = {true};
  const auto report = gg::validate(s);
  EXPECT_EQ(report.violations.size(), 3u);
}

TEST(Validate, NonFiniteObservedValue) {
  auto s = ten_points();
  s.values[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(gg::validate(s).ok());
  s.observed[3] = false;
  EXPECT_TRUE(gg::validate(s).ok());
}

TEST(Validate, DoesNotMutate) {
  const auto s = ten_points();
  auto copy = s;
  gg::validate(copy);
  EXPECT_EQ(copy, s);
}

TEST(Slice, Identity) { EXPECT_EQ(gg::slice(ten_points(), 0, 10), ten_points()); }

TEST(Slice, ShiftsStartTime) {
  const auto s = ten_points();
  const auto part = gg::slice(s, 3, 4);
  EXPECT_EQ(part.size(), 4u);
  EXPECT_EQ(part.start_time, s.start_time + 3 * s.step);
  EXPECT_EQ(part.values, (std::vector<double>{4, 5, 6, 7}));
  EXPECT_EQ(part.observed, std::vector<bool>(4, true));
}

TEST(Slice, OutOfBoundsNamesTheBound) {
  const auto msg = GG_EXPECT_ERROR(gg::slice(ten_points(), 8, 5), ErrorCode::range);
  EXPECT_NE(msg.find("end index 13"), std::string::npos);
  EXPECT_NE(GG_EXPECT_ERROR(gg::slice(ten_points(), -1, 2), ErrorCode::range).find("start_index"), std::string::npos);
  EXPECT_NE(GG_EXPECT_ERROR(gg::slice(ten_points(), 0, 0), ErrorCode::range).find("length"), std::string::npos);
}

TEST(Slice, Composes) {
  const auto s = ten_points();
  for (int a = 0; a < 10; ++a) {
    for (int n = 1; a + n <= 10; ++n) {
      const auto outer = gg::slice(s, a, n);
      for (int b = 0; b < n; ++b) {
        for (int m = 1; b + m <= n; ++m) EXPECT_EQ(gg::slice(outer, b, m), gg::slice(s, a + b, m));
      }
    }
  }
}

TEST(ObservedValues, FullWindow) {
  const auto s = gg::TimeSeries::fully_observed(0, 60, {1, 2, 3});
  EXPECT_EQ(sample_values(gg::observed_values(s, 0, 3)), (std::vector<double>{1, 2, 3}));
}

TEST(ObservedValues, SkipsMasked) {
  auto s = gg::TimeSeries::fully_observed(0, 60, {1, 2, 3});
  s.observed[1] = false;
  EXPECT_EQ(sample_values(gg::observed_values(s, 0, 3)), (std::vector<double>{1, 3}));
}

TEST(ObservedValues, FullyMissingWindow) {
  auto s = gg::TimeSeries::fully_observed(0, 60, {1, 2, 3});
  s.observed = {false, false, false};
  GG_EXPECT_ERROR(gg::observed_values(s, 0, 3), ErrorCode::empty_sample);
}

TEST(EmpiricalSample, RejectsEmptyAndNonFinite) {
  GG_EXPECT_ERROR(gg::EmpiricalSample({}), ErrorCode::empty_sample);
  GG_EXPECT_ERROR(gg::EmpiricalSample({1.0, std::numeric_limits<double>::infinity()}), ErrorCode::invalid_argument);
}

TEST(TimeSeries, ImpliedTimestamps) {
  const auto s = ten_points();
  EXPECT_EQ(s.time_at(0), 1'000'000);
  EXPECT_EQ(s.time_at(9), 1'000'000 + 9 * 3600);
}
