#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "gapgauge/error.hpp"

namespace gapgauge {

/// 1-based ranks, ascending; tied values share the average of their ranks.
inline std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

namespace detail {

inline void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::shape, "rank correlation needs equally long inputs");
  if (a.size() < 2) throw Error(ErrorCode::degenerate, "rank correlation needs at least 2 items");
}

}  // namespace detail

/// Spearman's rho. Without ties this is 1 - 6 sum d^2 / (n (n^2 - 1));
/// with ties, the Pearson correlation of average ranks. NaN when either
/// side is constant.
inline double spearman(std::span<const double> a, std::span<const double> b) {
  detail::check_pair(a, b);
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const auto n = static_cast<double>(a.size());
  const auto distinct = [](std::vector<double> r) {
    std::sort(r.begin(), r.end());
    return std::adjacent_find(r.begin(), r.end()) == r.end();
  };
  if (distinct(ra) && distinct(rb)) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
  }
  const double mean = 0.5 * (n + 1.0);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - mean) * (rb[i] - mean);
    saa += (ra[i] - mean) * (ra[i] - mean);
    sbb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

/// Kendall's tau-b. NaN when either side is constant.
inline double kendall(std::span<const double> a, std::span<const double> b) {
  detail::check_pair(a, b);
  long long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      if (da == 0.0 && db == 0.0) continue;
      if (da == 0.0) {
        ++ties_a;
      } else if (db == 0.0) {
        ++ties_b;
      } else if ((da > 0.0) == (db > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const auto n1 = static_cast<double>(concordant + discordant + ties_a);
  const auto n2 = static_cast<double>(concordant + discordant + ties_b);
  if (n1 == 0.0 || n2 == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(concordant - discordant) / std::sqrt(n1 * n2);
}

}  // namespace gapgauge
