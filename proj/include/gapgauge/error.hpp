#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gapgauge {

/// Machine-readable failure category carried by every gapgauge::Error.
enum class ErrorCode {
  range,
  empty_sample,
  invalid_argument,
  capacity,
  conflict,
  reference_window,
  context,
  seasonal_reference,
  insufficient_data,
  rank_deficiency,
  divergence,
  selection,
  training_window,
  training,
  search,
  shape,
  degenerate,
  config,
  schema,
  parse,
  cadence,
  duplicate_timestamp,
  io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::range: return "range";
    case ErrorCode::empty_sample: return "empty_sample";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::capacity: return "capacity";
    case ErrorCode::conflict: return "conflict";
    case ErrorCode::reference_window: return "reference_window";
    case ErrorCode::context: return "context";
    case ErrorCode::seasonal_reference: return "seasonal_reference";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::rank_deficiency: return "rank_deficiency";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::selection: return "selection";
    case ErrorCode::training_window: return "training_window";
    case ErrorCode::training: return "training";
    case ErrorCode::search: return "search";
    case ErrorCode::shape: return "shape";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::config: return "config";
    case ErrorCode::schema: return "schema";
    case ErrorCode::parse: return "parse";
    case ErrorCode::cadence: return "cadence";
    case ErrorCode::duplicate_timestamp: return "duplicate_timestamp";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gapgauge
