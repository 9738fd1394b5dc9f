#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gapgauge/error.hpp"
#include "gapgauge/series.hpp"

namespace gapgauge {

/// First-order Wasserstein distance between two empirical distributions,
/// each sample point carrying mass 1/size.
///
/// Integrates |F_p(x) - F_q(x)| over the merged breakpoints of both step
/// CDFs, which is exact for empirical distributions. The CDF difference on
/// each interval is kept as an integer numerator over |p|*|q|.
inline double wasserstein_1d(const EmpiricalSample& p, const EmpiricalSample& q) {
  std::vector<double> a(p.values().begin(), p.values().end());
  std::vector<double> b(q.values().begin(), q.values().end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());

  const auto n = static_cast<long long>(a.size());
  const auto m = static_cast<long long>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  long long below_a = 0;
  long long below_b = 0;
  double total = 0.0;
  double x = std::min(a.front(), b.front());
  while (i < a.size() || j < b.size()) {
    double next;
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
      next = a[i];
    } else {
      next = b[j];
    }
    if (next > x) {
      const long long diff = below_a * m - below_b * n;
      total += static_cast<double>(diff < 0 ? -diff : diff) * (next - x);
      x = next;
    }
    while (i < a.size() && a[i] == next) {
      ++i;
      ++below_a;
    }
    while (j < b.size() && b[j] == next) {
      ++j;
      ++below_b;
    }
  }
  return total / (static_cast<double>(n) * static_cast<double>(m));
}

/// Binned probability mass over strictly increasing edges.
struct Histogram {
  std::vector<double> edges;
  std::vector<double> mass;

  Histogram() = default;
  Histogram(std::vector<double> bin_edges, std::vector<double> bin_mass)
      : edges(std::move(bin_edges)), mass(std::move(bin_mass)) {
    if (edges.size() < 2 || mass.size() + 1 != edges.size()) {
      throw Error(ErrorCode::shape, "histogram needs |mass| = |edges| - 1 >= 1");
    }
    for (std::size_t k = 1; k < edges.size(); ++k) {
      if (!(edges[k] > edges[k - 1])) throw Error(ErrorCode::shape, "histogram edges must strictly increase");
    }
    double sum = 0.0;
    for (double w : mass) {
      if (!(w >= 0.0)) throw Error(ErrorCode::invalid_argument, "histogram mass must be non-negative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::invalid_argument, "histogram mass must sum to 1");
  }

  std::size_t bins() const { return mass.size(); }
};

/// Both samples binned over shared edges spanning the pooled [min, max].
/// A zero-width pooled range is widened by 0.5 on each side. Every bin
/// receives `epsilon` extra mass before renormalization.
inline std::pair<Histogram, Histogram> shared_histogram(const EmpiricalSample& p, const EmpiricalSample& q,
                                                        int bins, double epsilon) {
  if (bins < 2) throw Error(ErrorCode::invalid_argument, "histogram needs at least 2 bins");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::invalid_argument, "smoothing epsilon must be positive");

  const auto [pmin, pmax] = std::minmax_element(p.values().begin(), p.values().end());
  const auto [qmin, qmax] = std::minmax_element(q.values().begin(), q.values().end());
  double lo = std::min(*pmin, *qmin);
  double hi = std::max(*pmax, *qmax);
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  const auto fill_edges = [&] {
    for (int k = 0; k <= bins; ++k) edges[static_cast<std::size_t>(k)] = lo + (hi - lo) / bins * k;
    edges.back() = hi;
    return std::adjacent_find(edges.begin(), edges.end(), std::greater_equal<>()) == edges.end();
  };
  // a range at rounding-noise scale is a point mass; binning it would score noise
  const double resolution = 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});
  const bool point_mass = !(hi - lo > resolution) || !fill_edges();
  if (point_mass) {
    const double mid = lo + (hi - lo) / 2.0;
    lo = mid - 0.5;
    hi = mid + 0.5;
    fill_edges();
  }
  const double width = (hi - lo) / bins;

  const auto bin_of = [&](double v) {
    if (point_mass) return static_cast<std::size_t>(bins / 2);
    auto k = static_cast<long>((v - lo) / width);
    return static_cast<std::size_t>(std::clamp(k, 0L, static_cast<long>(bins) - 1));
  };
  const auto masses = [&](std::span<const double> values) {
    std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
    for (double v : values) counts[bin_of(v)] += 1.0;
    const double n = static_cast<double>(values.size());
    double total = 0.0;
    for (double& c : counts) {
      c = c / n + epsilon;
      total += c;
    }
    for (double& c : counts) c /= total;
    return counts;
  };

  return {Histogram(edges, masses(p.values())), Histogram(edges, masses(q.values()))};
}

/// Kullback-Leibler divergence in bits, 0 log 0 = 0.
inline double kl(const Histogram& p, const Histogram& q) {
  if (p.edges != q.edges) throw Error(ErrorCode::shape, "KL divergence needs histograms with identical edges");
  double sum = 0.0;
  for (std::size_t k = 0; k < p.bins(); ++k) {
    if (p.mass[k] == 0.0) continue;
    if (q.mass[k] <= 0.0) {
      throw Error(ErrorCode::invalid_argument, "reference histogram has zero mass where p is positive");
    }
    sum += p.mass[k] * std::log2(p.mass[k] / q.mass[k]);
  }
  return std::max(sum, 0.0);
}

/// Jensen-Shannon divergence in bits over two histograms with shared edges.
inline double jsd(const Histogram& p, const Histogram& q) {
  if (p.edges != q.edges) throw Error(ErrorCode::shape, "JS divergence needs histograms with identical edges");
  std::vector<double> mid(p.bins());
  for (std::size_t k = 0; k < p.bins(); ++k) mid[k] = 0.5 * (p.mass[k] + q.mass[k]);
  Histogram m;
  m.edges = p.edges;
  m.mass = std::move(mid);
  return std::clamp(0.5 * kl(p, m) + 0.5 * kl(q, m), 0.0, 1.0);
}

inline double jsd(const EmpiricalSample& p, const EmpiricalSample& q, int bins = 10, double epsilon = 1e-6) {
  const auto [hp, hq] = shared_histogram(p, q, bins, epsilon);
  return jsd(hp, hq);
}

namespace detail {

inline void check_aligned(std::span<const double> imputed, std::span<const double> truth) {
  if (imputed.size() != truth.size()) {
    throw Error(ErrorCode::shape, "imputed has " + std::to_string(imputed.size()) + " values, truth has " +
                                      std::to_string(truth.size()));
  }
  if (imputed.empty()) throw Error(ErrorCode::shape, "error metrics need at least one value");
}

}  // namespace detail

inline double rmse(std::span<const double> imputed, std::span<const double> truth) {
  detail::check_aligned(imputed, truth);
  double sum = 0.0;
  for (std::size_t i = 0; i < imputed.size(); ++i) {
    const double d = imputed[i] - truth[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(imputed.size()));
}

inline double mae(std::span<const double> imputed, std::span<const double> truth) {
  detail::check_aligned(imputed, truth);
  double sum = 0.0;
  for (std::size_t i = 0; i < imputed.size(); ++i) sum += std::abs(imputed[i] - truth[i]);
  return sum / static_cast<double>(imputed.size());
}

}  // namespace gapgauge
