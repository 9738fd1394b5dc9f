#pragma once

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "gapgauge/imputers/arima.hpp"
#include "gapgauge/imputers/gbt.hpp"
#include "gapgauge/imputers/polynomial.hpp"
#include "gapgauge/imputers/result.hpp"
#include "gapgauge/imputers/seasonal_naive.hpp"
#include "json.hpp"

namespace gapgauge {

/// Gap-filling method. New methods (e.g. a recurrent network) extend this
/// enum, ImputerConfig::Params and the dispatch in impute().
enum class ImputerKind { polynomial, seasonal_naive, arima, sarima, gbt };

constexpr std::string_view to_string(ImputerKind kind) {
  switch (kind) {
    case ImputerKind::polynomial: return "polynomial";
    case ImputerKind::seasonal_naive: return "seasonal_naive";
    case ImputerKind::arima: return "arima";
    case ImputerKind::sarima: return "sarima";
    case ImputerKind::gbt: return "gbt";
  }
  return "unknown";
}

inline ImputerKind parse_imputer_kind(std::string_view name) {
  for (auto kind : {ImputerKind::polynomial, ImputerKind::seasonal_naive, ImputerKind::arima, ImputerKind::sarima,
                    ImputerKind::gbt}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorCode::config, "unknown imputer kind '" + std::string(name) + "'");
}

struct ImputerConfig {
  using Params = std::variant<PolynomialParams, SeasonalNaiveParams, ArimaParams, GbtImputerParams>;

  ImputerKind kind = ImputerKind::polynomial;
  Params params = PolynomialParams{};

  static ImputerConfig defaults(ImputerKind kind) {
    switch (kind) {
      case ImputerKind::polynomial: return {kind, PolynomialParams{}};
      case ImputerKind::seasonal_naive: return {kind, SeasonalNaiveParams{}};
      case ImputerKind::arima: return {kind, ArimaParams{}};
      case ImputerKind::sarima: {
        ArimaParams p;
        p.seasonal = SeasonalBounds{};
        return {kind, p};
      }
      case ImputerKind::gbt: return {kind, GbtImputerParams{}};
    }
    throw Error(ErrorCode::config, "unknown imputer kind");
  }
};

/// Parameters as a flat JSON object, spans in samples. Field order is fixed.
inline nlohmann::ordered_json params_to_json(const ImputerConfig& config) {
  nlohmann::ordered_json j;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PolynomialParams>) {
          j["order"] = p.order;
          j["context"] = p.context;
        } else if constexpr (std::is_same_v<T, SeasonalNaiveParams>) {
          j["season"] = p.season;
        } else if constexpr (std::is_same_v<T, ArimaParams>) {
          j["train_span"] = p.train_span;
          j["min_train"] = p.min_train;
          j["p_max"] = p.p_max;
          j["d_max"] = p.d_max;
          j["q_max"] = p.q_max;
          if (p.seasonal) {
            j["P_max"] = p.seasonal->P_max;
            j["D_max"] = p.seasonal->D_max;
            j["Q_max"] = p.seasonal->Q_max;
            j["season"] = p.seasonal->s;
          }
        } else {
          j["train_span"] = p.train_span;
          j["trees"] = p.gbt.trees;
          j["max_depth"] = p.gbt.max_depth;
          j["learning_rate"] = p.gbt.learning_rate;
          j["subsample"] = p.gbt.subsample;
          j["sma_window"] = p.features.sma_window;
          j["ewma_alpha"] = p.features.ewma_alpha;
          j["use_sma"] = p.features.use_sma;
          j["use_ewma"] = p.features.use_ewma;
          j["use_hour"] = p.features.use_hour;
        }
      },
      config.params);
  return j;
}

namespace detail {

template <typename T>
void read_field(const nlohmann::ordered_json& j, const char* name, T& out, const std::string& path) {
  if (!j.contains(name)) return;
  const auto& v = j.at(name);
  bool ok = false;
  if constexpr (std::is_same_v<T, bool>) {
    ok = v.is_boolean();
  } else if constexpr (std::is_integral_v<T>) {
    ok = v.is_number_integer() || (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>());
  } else {
    ok = v.is_number();
  }
  if (!ok) throw Error(ErrorCode::schema, path + "." + name + ": wrong type");
  if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
    out = static_cast<T>(v.get<double>());
  } else {
    out = v.get<T>();
  }
}

}  // namespace detail

/// Throws schema errors naming `path` for unknown fields or bad values.
inline void validate(const ImputerConfig& config, const std::string& path = "imputer") {
  const auto fail = [&](const std::string& what) { throw Error(ErrorCode::schema, path + ": " + what); };
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PolynomialParams>) {
          if (p.order < 1) fail("order must be >= 1");
          if (p.context < 0) fail("context must be >= 0");
        } else if constexpr (std::is_same_v<T, SeasonalNaiveParams>) {
          if (p.season < 2) fail("season must be >= 2");
        } else if constexpr (std::is_same_v<T, ArimaParams>) {
          if (p.train_span < 1) fail("train_span must be >= 1");
          if (p.min_train < 0) fail("min_train must be >= 0");
          if (p.p_max < 0 || p.d_max < 0 || p.q_max < 0) fail("order bounds must be >= 0");
          if (p.seasonal && (p.seasonal->P_max < 0 || p.seasonal->D_max < 0 || p.seasonal->Q_max < 0)) {
            fail("seasonal order bounds must be >= 0");
          }
          if (p.seasonal && p.seasonal->s < 2) fail("season must be >= 2");
        } else {
          if (p.train_span < 1) fail("train_span must be >= 1");
          try {
            gapgauge::validate(p.gbt);
            gapgauge::validate(p.features);
          } catch (const Error& e) {
            fail(e.what());
          }
        }
      },
      config.params);
  const bool seasonal_kind = config.kind == ImputerKind::sarima;
  if (const auto* a = std::get_if<ArimaParams>(&config.params); a && seasonal_kind != a->seasonal.has_value()) {
    fail("seasonal bounds must be present exactly for sarima");
  }
}

inline ImputerConfig imputer_config_from_json(ImputerKind kind, const nlohmann::ordered_json& j,
                                              const std::string& path = "imputer") {
  if (!j.is_object()) throw Error(ErrorCode::schema, path + ": expected an object");
  ImputerConfig config = ImputerConfig::defaults(kind);
  const auto known = params_to_json(config);
  for (const auto& [key, value] : j.items()) {
    if (key != "kind" && !known.contains(key)) throw Error(ErrorCode::schema, path + "." + key + ": unknown field");
  }
  std::visit(
      [&](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PolynomialParams>) {
          detail::read_field(j, "order", p.order, path);
          detail::read_field(j, "context", p.context, path);
        } else if constexpr (std::is_same_v<T, SeasonalNaiveParams>) {
          detail::read_field(j, "season", p.season, path);
        } else if constexpr (std::is_same_v<T, ArimaParams>) {
          detail::read_field(j, "train_span", p.train_span, path);
          detail::read_field(j, "min_train", p.min_train, path);
          detail::read_field(j, "p_max", p.p_max, path);
          detail::read_field(j, "d_max", p.d_max, path);
          detail::read_field(j, "q_max", p.q_max, path);
          if (p.seasonal) {
            detail::read_field(j, "P_max", p.seasonal->P_max, path);
            detail::read_field(j, "D_max", p.seasonal->D_max, path);
            detail::read_field(j, "Q_max", p.seasonal->Q_max, path);
            detail::read_field(j, "season", p.seasonal->s, path);
          }
        } else {
          detail::read_field(j, "train_span", p.train_span, path);
          detail::read_field(j, "trees", p.gbt.trees, path);
          detail::read_field(j, "max_depth", p.gbt.max_depth, path);
          detail::read_field(j, "learning_rate", p.gbt.learning_rate, path);
          detail::read_field(j, "subsample", p.gbt.subsample, path);
          detail::read_field(j, "sma_window", p.features.sma_window, path);
          detail::read_field(j, "ewma_alpha", p.features.ewma_alpha, path);
          detail::read_field(j, "use_sma", p.features.use_sma, path);
          detail::read_field(j, "use_ewma", p.features.use_ewma, path);
          detail::read_field(j, "use_hour", p.features.use_hour, path);
        }
      },
      config.params);
  validate(config, path);
  return config;
}

/// Returns a copy of `config` with one named parameter replaced.
inline ImputerConfig with_parameter(const ImputerConfig& config, const std::string& name, double value) {
  auto j = params_to_json(config);
  if (!j.contains(name)) {
    throw Error(ErrorCode::config, "imputer " + std::string(to_string(config.kind)) + " has no parameter '" + name + "'");
  }
  if (j[name].is_boolean()) {
    j[name] = value != 0.0;
  } else if (j[name].is_number_integer()) {
    j[name] = static_cast<std::int64_t>(std::llround(value));
  } else {
    j[name] = value;
  }
  return imputer_config_from_json(config.kind, j);
}

/// `kind` plus the first 32 bits of the FNV-1a hash of the canonical parameter JSON.
inline std::string imputer_id(const ImputerConfig& config) {
  const std::string canonical = params_to_json(config).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char hex[9];
  std::snprintf(hex, sizeof hex, "%08x", static_cast<unsigned>(hash >> 32));
  return std::string(to_string(config.kind)) + "-" + hex;
}

/// Fills one gap. Deterministic given its arguments.
inline ImputationResult impute(const ImputerConfig& config, const TimeSeries& masked, const GapSpec& gap,
                               std::uint64_t seed) {
  ImputationResult result = std::visit(
      [&](const auto& p) -> ImputationResult {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PolynomialParams>) {
          return impute_polynomial(masked, gap, p);
        } else if constexpr (std::is_same_v<T, SeasonalNaiveParams>) {
          return impute_seasonal_naive(masked, gap, p.season);
        } else if constexpr (std::is_same_v<T, ArimaParams>) {
          return impute_arima(masked, gap, p);
        } else {
          return impute_gbt(masked, gap, p, mix_seed(seed, static_cast<std::uint64_t>(gap.start_index)));
        }
      },
      config.params);
  result.imputer_id = imputer_id(config);
  return result;
}

/// Polymorphic imputer, the seam the evaluation harness consumes.
class Imputer {
 public:
  virtual ~Imputer() = default;
  virtual std::string id() const = 0;
  virtual ImputationResult impute(const TimeSeries& masked, const GapSpec& gap, std::uint64_t seed) const = 0;
};

class ConfiguredImputer final : public Imputer {
 public:
  explicit ConfiguredImputer(ImputerConfig config) : config_(std::move(config)), id_(imputer_id(config_)) {}

  std::string id() const override { return id_; }
  ImputationResult impute(const TimeSeries& masked, const GapSpec& gap, std::uint64_t seed) const override {
    return gapgauge::impute(config_, masked, gap, seed);
  }
  const ImputerConfig& config() const { return config_; }

 private:
  ImputerConfig config_;
  std::string id_;
};

inline std::unique_ptr<Imputer> make_imputer(const ImputerConfig& config) {
  validate(config);
  return std::make_unique<ConfiguredImputer>(config);
}

}  // namespace gapgauge
