#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "gapgauge/gaps.hpp"
#include "gapgauge/imputers/polynomial.hpp"

namespace gg = gapgauge;
using gg::ErrorCode;

namespace {

gg::TimeSeries masked_signal(std::size_t n, const std::function<double(double)>& f, const gg::GapSpec& gap) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(static_cast<double>(i));
  auto s = gg::TimeSeries::fully_observed(0, 3600, v);
  for (auto i = gap.start_index; i < gap.end_index(); ++i) s.observed[static_cast<std::size_t>(i)] = false;
  return s;
}

void expect_exact(const std::function<double(double)>& f, const gg::GapSpec& gap, int order, std::int64_t context,
                  std::size_t n = 60) {
  const auto s = masked_signal(n, f, gap);
  const auto r = gg::impute_polynomial(s, gap, order, context);
  ASSERT_EQ(r.filled.size(), static_cast<std::size_t>(gap.length));
  for (std::int64_t k = 0; k < gap.length; ++k) {
    const double x = static_cast<double>(gap.start_index + k);
    EXPECT_NEAR(r.filled[static_cast<std::size_t>(k)], f(x), 1e-9) << "index " << x;
  }
}

}  // namespace

TEST(Polynomial, ParabolaExact) { expect_exact([](double i) { return i * i; }, {20, 4}, 2, 3); }

TEST(Polynomial, LineExact) { expect_exact([](double i) { return 3.0 * i - 7.0; }, {10, 5}, 1, 2); }

TEST(Polynomial, ConstantExact) { expect_exact([](double) { return 42.0; }, {30, 7}, 3, 0 + 8); }

TEST(Polynomial, ReproducesEveryDegreeUpToOrder) {
  for (int order = 1; order <= 4; ++order) {
    for (int degree = 0; degree <= order; ++degree) {
      const auto f = [degree](double i) { return std::pow(i / 10.0 - 2.0, degree) * 5.0 + 1.0; };
      expect_exact(f, {25, 6}, order, order + 3);
    }
  }
}

TEST(Polynomial, DefaultContextAndOrder) {
  const auto cubic = [](double i) { return 0.01 * i * i * i - 0.5 * i * i + i; };
  const gg::GapSpec gap{40, 10};
  const auto s = masked_signal(100, cubic, gap);
  const auto r = gg::impute_polynomial(s, gap);
  for (std::int64_t k = 0; k < gap.length; ++k) {
    EXPECT_NEAR(r.filled[static_cast<std::size_t>(k)], cubic(static_cast<double>(gap.start_index + k)), 1e-9);
  }
  EXPECT_EQ(gg::default_polynomial_context({0, 1}), 4);
  EXPECT_EQ(gg::default_polynomial_context({0, 10}), 20);
}

TEST(Polynomial, ExtrapolatesAtSeriesEnd) {
  const auto line = [](double i) { return 2.0 * i + 1.0; };
  const gg::GapSpec gap{26, 4};
  expect_exact(line, gap, 1, 5, 30);
}

TEST(Polynomial, InsufficientContext) {
  const gg::GapSpec gap{3, 4};
  const auto s = masked_signal(30, [](double i) { return i; }, gap);
  const auto msg = GG_EXPECT_ERROR(gg::impute_polynomial(s, gap, 3, 10), ErrorCode::context);
  EXPECT_NE(msg.find("needs 4"), std::string::npos) << msg;
  EXPECT_NE(msg.find("found 3 left"), std::string::npos) << msg;
}

TEST(Polynomial, MaskedContextPointsAreSkipped) {
  const auto line = [](double i) { return 4.0 - i; };
  const gg::GapSpec gap{20, 3};
  auto s = masked_signal(40, line, gap);
  s.observed[18] = false;
  s.values[18] = 1e9;  // never read
  const auto r = gg::impute_polynomial(s, gap, 1, 4);
  for (std::int64_t k = 0; k < 3; ++k) EXPECT_NEAR(r.filled[static_cast<std::size_t>(k)], line(20.0 + k), 1e-9);
}

TEST(Polynomial, BadArguments) {
  const gg::GapSpec gap{10, 2};
  const auto s = masked_signal(30, [](double i) { return i; }, gap);
  GG_EXPECT_ERROR(gg::impute_polynomial(s, gap, 0, 4), ErrorCode::invalid_argument);
  GG_EXPECT_ERROR(gg::impute_polynomial(s, {29, 5}, 1, 4), ErrorCode::range);
}
