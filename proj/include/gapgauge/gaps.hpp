#pragma once

#include <cstdint>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "gapgauge/error.hpp"
#include "gapgauge/random.hpp"
#include "gapgauge/series.hpp"
#include "json.hpp"

namespace gapgauge {

/// A contiguous run of `length` samples starting at `start_index`. The
/// `length` samples before it form the gap's reference window.
struct GapSpec {
  std::int64_t start_index = 0;
  std::int64_t length = 1;

  std::int64_t end_index() const { return start_index + length; }
  std::int64_t reference_start() const { return start_index - length; }

  bool operator==(const GapSpec&) const = default;
};

struct GapSet {
  std::vector<GapSpec> gaps;
  std::uint64_t seed = 0;
  std::int64_t source_length = 0;

  bool operator==(const GapSet&) const = default;
};

/// Places `n_gaps` gaps by rejection sampling. Each gap draws its length
/// uniformly from [min_len, max_len] once, then draws start positions
/// uniformly from [length, series_length - length] until the gap plus its
/// reference window is clear of every earlier placement. The whole run gets
/// 10'000 * n_gaps attempts.
inline GapSet generate_gaps(std::int64_t series_length, std::int64_t n_gaps, std::int64_t min_len,
                            std::int64_t max_len, std::uint64_t seed) {
  if (min_len < 1 || max_len < min_len) {
    throw Error(ErrorCode::invalid_argument, "gap lengths need 1 <= min_len <= max_len, got min_len=" +
                                                 std::to_string(min_len) + " max_len=" + std::to_string(max_len));
  }
  if (n_gaps < 1) throw Error(ErrorCode::invalid_argument, "n_gaps must be at least 1");

  Rng rng(seed);
  GapSet out;
  out.seed = seed;
  out.source_length = series_length;

  // occupied extended intervals, keyed by begin -> end (half-open)
  std::map<std::int64_t, std::int64_t> occupied;
  const auto clear = [&](std::int64_t begin, std::int64_t end) {
    auto next = occupied.lower_bound(begin);
    if (next != occupied.end() && next->first < end) return false;
    if (next != occupied.begin() && std::prev(next)->second > begin) return false;
    return true;
  };

  std::int64_t attempts_left = 10'000 * n_gaps;
  for (std::int64_t g = 0; g < n_gaps; ++g) {
    const std::int64_t length = rng.uniform_int(min_len, max_len);
    bool placed = false;
    while (!placed && attempts_left > 0) {
      --attempts_left;
      if (2 * length > series_length) continue;
      const std::int64_t start = rng.uniform_int(length, series_length - length);
      if (clear(start - length, start + length)) {
        occupied.emplace(start - length, start + length);
        out.gaps.push_back({start, length});
        placed = true;
      }
    }
    if (!placed) {
      throw Error(ErrorCode::capacity, "placed " + std::to_string(out.gaps.size()) + " of " +
                                           std::to_string(n_gaps) + " gaps in a series of length " +
                                           std::to_string(series_length));
    }
  }
  return out;
}

struct GappedSeries {
  TimeSeries masked;
  /// Held-out values per gap, same order as GapSet::gaps, index order within.
  std::vector<std::vector<double>> truth;
};

inline GappedSeries apply_gaps(const TimeSeries& series, const GapSet& gaps) {
  GappedSeries out{series, {}};
  out.truth.reserve(gaps.gaps.size());
  for (std::size_t g = 0; g < gaps.gaps.size(); ++g) {
    const GapSpec& gap = gaps.gaps[g];
    if (gap.length < 1 || gap.start_index < 0 || gap.end_index() > static_cast<std::int64_t>(series.size())) {
      throw Error(ErrorCode::range, "gap " + std::to_string(g) + " does not fit a series of length " +
                                        std::to_string(series.size()));
    }
    std::vector<double> held_out;
    held_out.reserve(static_cast<std::size_t>(gap.length));
    for (auto i = gap.start_index; i < gap.end_index(); ++i) {
      const auto idx = static_cast<std::size_t>(i);
      if (!out.masked.observed[idx]) {
        throw Error(ErrorCode::conflict, "gap " + std::to_string(g) + " (start " + std::to_string(gap.start_index) +
                                             ") covers already-missing index " + std::to_string(i));
      }
      held_out.push_back(out.masked.values[idx]);
      out.masked.observed[idx] = false;
    }
    out.truth.push_back(std::move(held_out));
  }
  return out;
}

/// The `gap.length` observed values immediately preceding the gap.
inline EmpiricalSample pre_gap_window(const TimeSeries& series, const GapSpec& gap) {
  if (gap.length < 1 || gap.reference_start() < 0) {
    throw Error(ErrorCode::reference_window, "gap at " + std::to_string(gap.start_index) + " with length " +
                                                 std::to_string(gap.length) + " has no room for a reference window");
  }
  if (gap.start_index > static_cast<std::int64_t>(series.size())) {
    throw Error(ErrorCode::reference_window, "gap start beyond series end");
  }
  std::vector<double> window;
  window.reserve(static_cast<std::size_t>(gap.length));
  for (auto i = gap.reference_start(); i < gap.start_index; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (!series.observed[idx]) {
      throw Error(ErrorCode::reference_window, "reference window of gap at " + std::to_string(gap.start_index) +
                                                   " has unobserved index " + std::to_string(i));
    }
    window.push_back(series.values[idx]);
  }
  return EmpiricalSample(std::move(window));
}

inline nlohmann::ordered_json to_json(const GapSet& set) {
  nlohmann::ordered_json j;
  j["seed"] = set.seed;
  j["source_length"] = set.source_length;
  j["gaps"] = nlohmann::ordered_json::array();
  for (const auto& g : set.gaps) {
    nlohmann::ordered_json entry;
    entry["start"] = g.start_index;
    entry["len"] = g.length;
    j["gaps"].push_back(std::move(entry));
  }
  return j;
}

inline GapSet gapset_from_json(const nlohmann::ordered_json& j) {
  try {
    GapSet set;
    set.seed = j.at("seed").get<std::uint64_t>();
    set.source_length = j.at("source_length").get<std::int64_t>();
    for (const auto& entry : j.at("gaps")) {
      set.gaps.push_back({entry.at("start").get<std::int64_t>(), entry.at("len").get<std::int64_t>()});
    }
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema, std::string("gap set: ") + e.what());
  }
}

}  // namespace gapgauge
