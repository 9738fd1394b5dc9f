#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "gapgauge/error.hpp"
#include "gapgauge/random.hpp"
#include "gapgauge/series.hpp"

namespace gapgauge {

enum class SynthKind { seasonal, ar1, constant, sine };

inline SynthKind parse_synth_kind(std::string_view name) {
  if (name == "seasonal") return SynthKind::seasonal;
  if (name == "ar1") return SynthKind::ar1;
  if (name == "constant") return SynthKind::constant;
  if (name == "sine" || name == "sine+noise") return SynthKind::sine;
  throw Error(ErrorCode::config, "unknown synthetic series kind '" + std::string(name) + "'");
}

struct SynthParams {
  std::int64_t start_time = 1'633'305'600;  // 2021-10-04T00:00:00Z, a Monday
  std::int64_t step = 3600;
  // seasonal: level + daily and weekly sinusoids (periods in hours) + noise
  double level = 100.0;
  double daily_amplitude = 40.0;
  double weekly_amplitude = 15.0;
  // ar1: mean + stationary AR(1) with unit innovation scale times noise_sd
  double coefficient = 0.8;
  double mean = 0.0;
  // sine: amplitude * sin(2 pi i / period + phase) + noise
  double amplitude = 10.0;
  double period = 24.0;  // samples
  double phase = 0.0;
  // constant
  double value = 5.0;
  double noise_sd = 5.0;
};

inline TimeSeries synthesize_series(SynthKind kind, std::int64_t length, const SynthParams& params, std::uint64_t seed) {
  if (length < 1) throw Error(ErrorCode::invalid_argument, "synthetic series length must be at least 1");
  if (params.step <= 0) throw Error(ErrorCode::invalid_argument, "synthetic series step must be positive");
  Rng rng(seed);
  std::vector<double> values(static_cast<std::size_t>(length));
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (kind) {
    case SynthKind::constant:
      std::fill(values.begin(), values.end(), params.value);
      break;
    case SynthKind::sine:
      for (std::int64_t i = 0; i < length; ++i) {
        const double noise = params.noise_sd > 0.0 ? params.noise_sd * rng.normal() : 0.0;
        values[static_cast<std::size_t>(i)] =
            params.amplitude * std::sin(two_pi * static_cast<double>(i) / params.period + params.phase) + noise;
      }
      break;
    case SynthKind::seasonal:
      for (std::int64_t i = 0; i < length; ++i) {
        const double hours = static_cast<double>(params.start_time + i * params.step) / 3600.0;
        const double noise = params.noise_sd > 0.0 ? params.noise_sd * rng.normal() : 0.0;
        values[static_cast<std::size_t>(i)] = params.level +
                                              params.daily_amplitude * std::sin(two_pi * hours / 24.0) +
                                              params.weekly_amplitude * std::sin(two_pi * hours / 168.0) + noise;
      }
      break;
    case SynthKind::ar1: {
      if (!(std::abs(params.coefficient) < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "AR(1) coefficient must lie in (-1, 1)");
      }
      double x = params.noise_sd * rng.normal() / std::sqrt(1.0 - params.coefficient * params.coefficient);
      for (std::int64_t i = 0; i < length; ++i) {
        if (i > 0) x = params.coefficient * x + params.noise_sd * rng.normal();
        values[static_cast<std::size_t>(i)] = params.mean + x;
      }
      break;
    }
  }
  return TimeSeries::fully_observed(params.start_time, params.step, std::move(values));
}

}  // namespace gapgauge
