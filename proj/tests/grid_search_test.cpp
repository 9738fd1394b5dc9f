#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "gapgauge/imputers/grid_search.hpp"

namespace gg = gapgauge;
using gg::ErrorCode;

namespace {

gg::ImputerConfig polynomial(int order, std::int64_t context = 0) {
  return {gg::ImputerKind::polynomial, gg::PolynomialParams{order, context}};
}

gg::TimeSeries noisy_line(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, 2.0);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 0.3 * static_cast<double>(i) + noise(gen);
  return gg::TimeSeries::fully_observed(0, 3600, v);
}

}  // namespace

TEST(ExpandGrid, LastParameterVariesFastest) {
  const auto configs = gg::expand_grid(polynomial(3), {{"order", {1, 2}}, {"context", {4, 8, 16}}});
  ASSERT_EQ(configs.size(), 6u);
  const std::pair<int, std::int64_t> expected[] = {{1, 4}, {1, 8}, {1, 16}, {2, 4}, {2, 8}, {2, 16}};
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto& p = std::get<gg::PolynomialParams>(configs[i].params);
    EXPECT_EQ(p.order, expected[i].first);
    EXPECT_EQ(p.context, expected[i].second);
  }
}

TEST(ExpandGrid, UnknownParameter) {
  GG_EXPECT_ERROR(gg::expand_grid(polynomial(3), {{"season", {24}}}), ErrorCode::config);
}

TEST(GridSearch, SingletonGridReturnsThatConfig) {
  const auto s = noisy_line(2000, 1);
  const auto gaps = gg::generate_gaps(2000, 10, 2, 12, 3);
  const auto result = gg::hyperparameter_grid_search(s, gaps, {{"order", {2}}}, polynomial(3));
  EXPECT_EQ(std::get<gg::PolynomialParams>(result.best.params).order, 2);
  ASSERT_EQ(result.scores.size(), 1u);
  EXPECT_EQ(result.scores[0], result.best_rmse);
  EXPECT_TRUE(std::isfinite(result.best_rmse));
}

TEST(GridSearch, EmptyGrid) {
  const auto s = noisy_line(500, 1);
  const auto gaps = gg::generate_gaps(500, 5, 2, 6, 3);
  GG_EXPECT_ERROR(gg::hyperparameter_grid_search(s, gaps, {}, polynomial(3)), ErrorCode::search);
  GG_EXPECT_ERROR(gg::hyperparameter_grid_search(s, gaps, {{"order", {}}}, polynomial(3)), ErrorCode::search);
}

TEST(GridSearch, NoValidationGaps) {
  const auto s = noisy_line(500, 1);
  GG_EXPECT_ERROR(gg::hyperparameter_grid_search(s, gg::GapSet{{}, 0, 500}, {{"order", {1}}}, polynomial(3)),
                  ErrorCode::search);
}

TEST(GridSearch, SimplerModelWinsOnNoisyLine) {
  // a high-order fit chases the noise in a short context window
  int simple_wins = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto s = noisy_line(3000, 100 + rep);
    const auto gaps = gg::generate_gaps(3000, 20, 4, 12, rep);
    const auto result = gg::hyperparameter_grid_search(s, gaps, {{"order", {1, 7}}}, polynomial(3, 16));
    if (std::get<gg::PolynomialParams>(result.best.params).order == 1) ++simple_wins;
  }
  EXPECT_GE(simple_wins, 18);
}

TEST(GridSearch, TieKeepsEarlierConfig) {
  // every season that is a multiple of the period copies exact values, so all scores are zero
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>((i * 7) % 24);
  const auto s = gg::TimeSeries::fully_observed(0, 3600, v);
  const gg::GapSet gaps{{{200, 5}, {500, 8}, {900, 3}}, 0, 1000};
  const gg::ImputerConfig base{gg::ImputerKind::seasonal_naive, gg::SeasonalNaiveParams{24}};
  const auto result = gg::hyperparameter_grid_search(s, gaps, {{"season", {48, 24, 72}}}, base);
  EXPECT_EQ(result.scores, (std::vector<double>{0.0, 0.0, 0.0}));
  EXPECT_EQ(std::get<gg::SeasonalNaiveParams>(result.best.params).season, 48);
}

TEST(GridSearch, FailingConfigsRecorded) {
  // order 9 needs 10 points per context window, more than context 2 supplies
  const auto s = noisy_line(1000, 4);
  const auto gaps = gg::generate_gaps(1000, 5, 2, 4, 6);
  const auto result = gg::hyperparameter_grid_search(s, gaps, {{"order", {9, 1}}}, polynomial(1, 2));
  EXPECT_TRUE(std::isnan(result.scores[0]));
  EXPECT_EQ(result.failures.size(), 1u);
  EXPECT_EQ(std::get<gg::PolynomialParams>(result.best.params).order, 1);
  const auto msg = GG_EXPECT_ERROR(gg::hyperparameter_grid_search(s, gaps, {{"order", {9}}}, polynomial(1, 2)),
                                   ErrorCode::search);
  EXPECT_NE(msg.find("every configuration failed"), std::string::npos) << msg;
}
