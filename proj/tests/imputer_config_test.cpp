#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "gapgauge/imputers/imputer.hpp"

namespace gg = gapgauge;
using gg::ErrorCode;
using json = nlohmann::ordered_json;

TEST(ImputerKind, NamesRoundTrip) {
  for (auto kind : {gg::ImputerKind::polynomial, gg::ImputerKind::seasonal_naive, gg::ImputerKind::arima,
                    gg::ImputerKind::sarima, gg::ImputerKind::gbt}) {
    EXPECT_EQ(gg::parse_imputer_kind(gg::to_string(kind)), kind);
  }
  GG_EXPECT_ERROR(gg::parse_imputer_kind("lstm"), ErrorCode::config);
}

TEST(ImputerConfig, Defaults) {
  const auto poly = std::get<gg::PolynomialParams>(gg::ImputerConfig::defaults(gg::ImputerKind::polynomial).params);
  EXPECT_EQ(poly.order, 3);
  EXPECT_EQ(std::get<gg::SeasonalNaiveParams>(gg::ImputerConfig::defaults(gg::ImputerKind::seasonal_naive).params).season,
            24);
  const auto sarima = std::get<gg::ArimaParams>(gg::ImputerConfig::defaults(gg::ImputerKind::sarima).params);
  ASSERT_TRUE(sarima.seasonal.has_value());
  EXPECT_EQ(sarima.seasonal->s, 24);
  EXPECT_FALSE(std::get<gg::ArimaParams>(gg::ImputerConfig::defaults(gg::ImputerKind::arima).params).seasonal);
  for (auto kind : {gg::ImputerKind::polynomial, gg::ImputerKind::seasonal_naive, gg::ImputerKind::arima,
                    gg::ImputerKind::sarima, gg::ImputerKind::gbt}) {
    EXPECT_NO_THROW(gg::validate(gg::ImputerConfig::defaults(kind)));
  }
}

TEST(ImputerConfig, JsonRoundTrip) {
  for (auto kind : {gg::ImputerKind::polynomial, gg::ImputerKind::seasonal_naive, gg::ImputerKind::arima,
                    gg::ImputerKind::sarima, gg::ImputerKind::gbt}) {
    const auto config = gg::ImputerConfig::defaults(kind);
    const auto back = gg::imputer_config_from_json(kind, gg::params_to_json(config));
    EXPECT_EQ(gg::params_to_json(back).dump(), gg::params_to_json(config).dump());
  }
}

TEST(ImputerConfig, PartialJsonKeepsDefaults) {
  const auto c = gg::imputer_config_from_json(gg::ImputerKind::gbt, json::parse(R"({"trees": 5, "use_sma": false})"));
  const auto& p = std::get<gg::GbtImputerParams>(c.params);
  EXPECT_EQ(p.gbt.trees, 5);
  EXPECT_FALSE(p.features.use_sma);
  EXPECT_EQ(p.gbt.max_depth, gg::GbtParams{}.max_depth);
}

TEST(ImputerConfig, UnknownFieldRejected) {
  const auto msg = GG_EXPECT_ERROR(
      gg::imputer_config_from_json(gg::ImputerKind::polynomial, json::parse(R"({"degree": 2})"), "imputers[0]"),
      ErrorCode::schema);
  EXPECT_NE(msg.find("imputers[0].degree"), std::string::npos) << msg;
}

TEST(ImputerConfig, WrongTypeAndBadValue) {
  GG_EXPECT_ERROR(gg::imputer_config_from_json(gg::ImputerKind::polynomial, json::parse(R"({"order": "3"})")),
                  ErrorCode::schema);
  GG_EXPECT_ERROR(gg::imputer_config_from_json(gg::ImputerKind::polynomial, json::parse(R"({"order": 2.5})")),
                  ErrorCode::schema);
  GG_EXPECT_ERROR(gg::imputer_config_from_json(gg::ImputerKind::seasonal_naive, json::parse(R"({"season": 1})")),
                  ErrorCode::schema);
  GG_EXPECT_ERROR(gg::imputer_config_from_json(gg::ImputerKind::gbt, json::parse(R"({"learning_rate": 0})")),
                  ErrorCode::schema);
}

TEST(ImputerConfig, SeasonalBoundsOnlyForSarima) {
  gg::ImputerConfig c{gg::ImputerKind::arima, gg::ArimaParams{}};
  std::get<gg::ArimaParams>(c.params).seasonal = gg::SeasonalBounds{};
  GG_EXPECT_ERROR(gg::validate(c), ErrorCode::schema);
  GG_EXPECT_ERROR(gg::imputer_config_from_json(gg::ImputerKind::arima, json::parse(R"({"P_max": 1})")),
                  ErrorCode::schema);
}

TEST(WithParameter, ReplacesOneField) {
  const auto base = gg::ImputerConfig::defaults(gg::ImputerKind::gbt);
  const auto c = gg::with_parameter(base, "learning_rate", 0.25);
  EXPECT_EQ(std::get<gg::GbtImputerParams>(c.params).gbt.learning_rate, 0.25);
  auto expected = std::get<gg::GbtImputerParams>(base.params);
  expected.gbt.learning_rate = 0.25;
  EXPECT_EQ(std::get<gg::GbtImputerParams>(c.params), expected);
  EXPECT_FALSE(std::get<gg::GbtImputerParams>(gg::with_parameter(base, "use_hour", 0).params).features.use_hour);
  GG_EXPECT_ERROR(gg::with_parameter(base, "order", 2), ErrorCode::config);
}

TEST(ImputerId, StableAndParameterSensitive) {
  const auto a = gg::ImputerConfig::defaults(gg::ImputerKind::polynomial);
  EXPECT_EQ(gg::imputer_id(a), gg::imputer_id(gg::ImputerConfig::defaults(gg::ImputerKind::polynomial)));
  EXPECT_EQ(gg::imputer_id(a).rfind("polynomial-", 0), 0u);
  EXPECT_EQ(gg::imputer_id(a).size(), std::string("polynomial-").size() + 8);
  EXPECT_NE(gg::imputer_id(a), gg::imputer_id(gg::with_parameter(a, "order", 2)));
  // arima and sarima share a parameter type but not an id
  EXPECT_NE(gg::imputer_id(gg::ImputerConfig::defaults(gg::ImputerKind::arima)),
            gg::imputer_id(gg::ImputerConfig::defaults(gg::ImputerKind::sarima)));
}

TEST(Impute, DispatchesAndStampsId) {
  std::vector<double> v(400);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i % 24);
  auto s = gg::TimeSeries::fully_observed(0, 3600, v);
  const gg::GapSpec gap{300, 5};
  for (auto i = gap.start_index; i < gap.end_index(); ++i) s.observed[static_cast<std::size_t>(i)] = false;

  const gg::ImputerConfig naive{gg::ImputerKind::seasonal_naive, gg::SeasonalNaiveParams{24}};
  const auto r = gg::impute(naive, s, gap, 0);
  EXPECT_EQ(r.imputer_id, gg::imputer_id(naive));
  EXPECT_EQ(r.filled, (std::vector<double>{12, 13, 14, 15, 16}));

  const auto imp = gg::make_imputer(naive);
  EXPECT_EQ(imp->id(), r.imputer_id);
  EXPECT_EQ(imp->impute(s, gap, 0).filled, r.filled);
}

TEST(MakeImputer, ValidatesConfig) {
  GG_EXPECT_ERROR(gg::make_imputer({gg::ImputerKind::polynomial, gg::PolynomialParams{0, 0}}), ErrorCode::schema);
}
