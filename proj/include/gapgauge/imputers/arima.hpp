#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "gapgauge/detail/least_squares.hpp"
#include "gapgauge/imputers/result.hpp"

namespace gapgauge {

/// (p, d, q) x (P, D, Q)_s. s = 0 means no seasonal part.
struct ArimaOrder {
  int p = 0;
  int d = 0;
  int q = 0;
  int P = 0;
  int D = 0;
  int Q = 0;
  int s = 0;

  int parameter_count() const { return p + q + P + Q + 1; }
  int offset() const { return d + D * s; }
  bool has_ma() const { return q > 0 || Q > 0; }

  auto operator<=>(const ArimaOrder&) const = default;
};

inline std::string to_string(const ArimaOrder& o) {
  std::string out = "(" + std::to_string(o.p) + "," + std::to_string(o.d) + "," + std::to_string(o.q) + ")";
  if (o.s > 0) {
    out += "(" + std::to_string(o.P) + "," + std::to_string(o.D) + "," + std::to_string(o.Q) + ")" +
           std::to_string(o.s);
  }
  return out;
}

inline void validate_order(const ArimaOrder& o) {
  if (o.p < 0 || o.d < 0 || o.q < 0 || o.P < 0 || o.D < 0 || o.Q < 0 || o.s < 0) {
    throw Error(ErrorCode::invalid_argument, "ARIMA orders must be non-negative, got " + to_string(o));
  }
  if (o.s == 0 && (o.P > 0 || o.D > 0 || o.Q > 0)) {
    throw Error(ErrorCode::invalid_argument, "seasonal terms need a season length, got " + to_string(o));
  }
  if (o.s == 1) throw Error(ErrorCode::invalid_argument, "season length must be at least 2");
  if (o.p + o.q + o.P + o.Q == 0 && o.d + o.D == 0) {
    throw Error(ErrorCode::degenerate, "order " + to_string(o) + " has no AR, MA or differencing term");
  }
}

/// Innovations of the first stage come from a long autoregression of this
/// order: max(ceil(10 log10 n), s + 1), capped at n / 4.
inline int default_long_ar_order(std::size_t n, int s) {
  const int by_length = static_cast<int>(std::ceil(10.0 * std::log10(static_cast<double>(std::max<std::size_t>(n, 2)))));
  const int wanted = std::max(by_length, s > 0 ? s + 1 : 0);
  return std::max(1, std::min(wanted, static_cast<int>(n / 4)));
}

/// Conditional least-squares ARIMA fit plus the state needed to forecast
/// from the end of its training window.
///
/// The differenced series w follows the multiplicative model
///   (1 - phi(B)) (1 - Phi(B^s)) w_t = c + (1 + theta(B)) (1 + Theta(B^s)) e_t.
/// ar_lags/ar_coef and ma_lags/ma_coef hold the expanded products, so
///   w_t = c + sum_i ar_coef[i] * w_{t - ar_lags[i]} + sum_j ma_coef[j] * e_{t - ma_lags[j]} + e_t.
/// The factor coefficients are kept in phi, seasonal_phi, theta and seasonal_theta.
struct ArimaModel {
  ArimaOrder order;
  std::vector<int> ar_lags;
  std::vector<double> ar_coef;
  std::vector<int> ma_lags;
  std::vector<double> ma_coef;
  std::vector<double> phi;
  std::vector<double> seasonal_phi;
  std::vector<double> theta;
  std::vector<double> seasonal_theta;
  double intercept = 0.0;
  double sse = 0.0;
  double sigma2 = 0.0;
  double aic = 0.0;
  std::size_t n_rows = 0;

  /// levels[0] is the training series; levels[k + 1] differences levels[k] at lag diff_lags[k].
  std::vector<std::vector<double>> levels;
  std::vector<int> diff_lags;
  /// Innovation estimates aligned with levels.back(), zero where undefined.
  std::vector<double> innovations;

  const std::vector<double>& differenced() const { return levels.back(); }

  /// Forecasts `horizon` steps past the training window, future innovations set to zero.
  std::vector<double> forecast(std::int64_t horizon) const {
    std::vector<double> w = levels.back();
    std::vector<double> e = innovations;
    const std::size_t base = w.size();
    for (std::int64_t h = 0; h < horizon; ++h) {
      const std::size_t t = w.size();
      double value = intercept;
      for (std::size_t i = 0; i < ar_lags.size(); ++i) value += ar_coef[i] * w[t - static_cast<std::size_t>(ar_lags[i])];
      for (std::size_t j = 0; j < ma_lags.size(); ++j) value += ma_coef[j] * e[t - static_cast<std::size_t>(ma_lags[j])];
      w.push_back(value);
      e.push_back(0.0);
    }
    std::vector<double> ahead(w.begin() + static_cast<std::ptrdiff_t>(base), w.end());
    for (std::size_t k = diff_lags.size(); k-- > 0;) {
      std::vector<double> x = levels[k];
      const auto lag = static_cast<std::size_t>(diff_lags[k]);
      for (double v : ahead) x.push_back(v + x[x.size() - lag]);
      ahead.assign(x.end() - static_cast<std::ptrdiff_t>(ahead.size()), x.end());
    }
    return ahead;
  }
};

namespace detail {

inline std::vector<double> difference(const std::vector<double>& x, int lag) {
  const auto l = static_cast<std::size_t>(lag);
  if (x.size() <= l) return {};
  std::vector<double> out(x.size() - l);
  for (std::size_t t = l; t < x.size(); ++t) out[t - l] = x[t] - x[t - l];
  return out;
}

/// A training series differenced for one (d, D, s) choice, with stage-one
/// innovations computed on demand.
struct DifferencedSeries {
  std::vector<std::vector<double>> levels;
  std::vector<int> diff_lags;
  int long_ar_order = 0;
  std::optional<std::vector<double>> innovations;
  std::optional<Error> innovation_error;

  DifferencedSeries(const std::vector<double>& y, int d, int D, int s, int long_ar) : long_ar_order(long_ar) {
    levels.push_back(y);
    for (int k = 0; k < d; ++k) diff_lags.push_back(1);
    for (int k = 0; k < D; ++k) diff_lags.push_back(s);
    for (int lag : diff_lags) levels.push_back(difference(levels.back(), lag));
  }

  const std::vector<double>& w() const { return levels.back(); }

  /// Residuals of an OLS autoregression of order long_ar_order on w.
  const std::vector<double>& stage_one() {
    if (innovations) return *innovations;
    if (innovation_error) throw *innovation_error;
    const auto& x = w();
    const auto m = static_cast<std::size_t>(long_ar_order);
    if (x.size() <= 2 * m + 1) {
      innovation_error = Error(ErrorCode::insufficient_data, "long autoregression of order " + std::to_string(m) +
                                                                 " needs more than " + std::to_string(2 * m + 1) +
                                                                 " differenced points");
      throw *innovation_error;
    }
    const auto rows = static_cast<Eigen::Index>(x.size() - m);
    Eigen::MatrixXd design(rows, static_cast<Eigen::Index>(m) + 1);
    Eigen::VectorXd target(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const std::size_t t = m + static_cast<std::size_t>(r);
      design(r, 0) = 1.0;
      for (std::size_t k = 1; k <= m; ++k) design(r, static_cast<Eigen::Index>(k)) = x[t - k];
      target(r) = x[t];
    }
    try {
      const auto fit = least_squares(design, target, "long autoregression");
      const Eigen::VectorXd resid = target - design * fit.coef;
      std::vector<double> e(x.size(), 0.0);
      for (Eigen::Index r = 0; r < rows; ++r) e[m + static_cast<std::size_t>(r)] = resid(r);
      innovations = std::move(e);
    } catch (const Error& err) {
      innovation_error = err;
      throw;
    }
    return *innovations;
  }
};

/// Expands (1 + sign * sum_i a_i B^i)(1 + sign * sum_k A_k B^(k s)) into
/// sum_L c_L B^L over L >= 1, returned as parallel lag/coefficient lists in
/// increasing lag order. sign = -1 gives the AR convention, +1 the MA one.
inline void expand_product(const std::vector<double>& regular, const std::vector<double>& seasonal, int s, double sign,
                           std::vector<int>& lags, std::vector<double>& coef) {
  const int p = static_cast<int>(regular.size());
  const int P = static_cast<int>(seasonal.size());
  std::vector<double> dense(static_cast<std::size_t>(p + P * s) + 1, 0.0);
  std::vector<bool> used(dense.size(), false);
  for (int i = 1; i <= p; ++i) {
    dense[static_cast<std::size_t>(i)] += regular[static_cast<std::size_t>(i - 1)];
    used[static_cast<std::size_t>(i)] = true;
  }
  for (int k = 1; k <= P; ++k) {
    dense[static_cast<std::size_t>(k * s)] += seasonal[static_cast<std::size_t>(k - 1)];
    used[static_cast<std::size_t>(k * s)] = true;
    for (int i = 1; i <= p; ++i) {
      // the cross term a A B^(i+ks) keeps its sign on the MA side and flips on the AR side
      dense[static_cast<std::size_t>(i + k * s)] +=
          sign * regular[static_cast<std::size_t>(i - 1)] * seasonal[static_cast<std::size_t>(k - 1)];
      used[static_cast<std::size_t>(i + k * s)] = true;
    }
  }
  lags.clear();
  coef.clear();
  for (std::size_t L = 1; L < dense.size(); ++L) {
    if (!used[L]) continue;
    lags.push_back(static_cast<int>(L));
    coef.push_back(dense[L]);
  }
}

/// Smallest original-series index usable as a regression row for `order`.
inline std::size_t first_row(const ArimaOrder& order, int long_ar_order) {
  int w_start = order.p + order.P * order.s;
  if (order.has_ma()) w_start = std::max(w_start, long_ar_order + order.q + order.Q * order.s);
  return static_cast<std::size_t>(order.offset() + w_start);
}

/// Factor coefficients of a multiplicative model in the order
/// [c, phi_1..p, Phi_1..P, theta_1..q, Theta_1..Q].
struct FactorParams {
  double c = 0.0;
  std::vector<double> phi, seasonal_phi, theta, seasonal_theta;

  static FactorParams from_vector(const Eigen::VectorXd& v, const ArimaOrder& o) {
    FactorParams f;
    Eigen::Index i = 0;
    f.c = v(i++);
    for (int k = 0; k < o.p; ++k) f.phi.push_back(v(i++));
    for (int k = 0; k < o.P; ++k) f.seasonal_phi.push_back(v(i++));
    for (int k = 0; k < o.q; ++k) f.theta.push_back(v(i++));
    for (int k = 0; k < o.Q; ++k) f.seasonal_theta.push_back(v(i++));
    return f;
  }
};

/// Residuals w_t - prediction_t over rows t = w_start..n_w-1 and, when
/// `jacobian` is given, the derivative of the prediction with respect to the
/// factor coefficients.
inline Eigen::VectorXd stage_two_residuals(const std::vector<double>& w, const std::vector<double>& e,
                                           std::size_t w_start, const ArimaOrder& o, const FactorParams& f,
                                           Eigen::MatrixXd* jacobian) {
  std::vector<int> ar_lags, ma_lags;
  std::vector<double> ar_coef, ma_coef;
  expand_product(f.phi, f.seasonal_phi, o.s, -1.0, ar_lags, ar_coef);
  expand_product(f.theta, f.seasonal_theta, o.s, 1.0, ma_lags, ma_coef);
  const auto rows = static_cast<Eigen::Index>(w.size() - w_start);
  Eigen::VectorXd resid(rows);
  if (jacobian) jacobian->resize(rows, o.parameter_count());
  const auto s = static_cast<std::size_t>(o.s);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::size_t t = w_start + static_cast<std::size_t>(r);
    double pred = f.c;
    for (std::size_t i = 0; i < ar_lags.size(); ++i) pred += ar_coef[i] * w[t - static_cast<std::size_t>(ar_lags[i])];
    for (std::size_t j = 0; j < ma_lags.size(); ++j) pred += ma_coef[j] * e[t - static_cast<std::size_t>(ma_lags[j])];
    resid(r) = w[t] - pred;
    if (!jacobian) continue;
    auto& J = *jacobian;
    Eigen::Index c = 0;
    J(r, c++) = 1.0;
    for (std::size_t i = 1; i <= f.phi.size(); ++i) {
      double g = w[t - i];
      for (std::size_t k = 1; k <= f.seasonal_phi.size(); ++k) g -= f.seasonal_phi[k - 1] * w[t - i - k * s];
      J(r, c++) = g;
    }
    for (std::size_t k = 1; k <= f.seasonal_phi.size(); ++k) {
      double g = w[t - k * s];
      for (std::size_t i = 1; i <= f.phi.size(); ++i) g -= f.phi[i - 1] * w[t - i - k * s];
      J(r, c++) = g;
    }
    for (std::size_t j = 1; j <= f.theta.size(); ++j) {
      double g = e[t - j];
      for (std::size_t k = 1; k <= f.seasonal_theta.size(); ++k) g += f.seasonal_theta[k - 1] * e[t - j - k * s];
      J(r, c++) = g;
    }
    for (std::size_t k = 1; k <= f.seasonal_theta.size(); ++k) {
      double g = e[t - k * s];
      for (std::size_t j = 1; j <= f.theta.size(); ++j) g += f.theta[j - 1] * e[t - j - k * s];
      J(r, c++) = g;
    }
  }
  return resid;
}

/// Second Hannan-Rissanen stage: least squares of w_t on an intercept, the
/// AR lags of w and the MA lags of the stage-one innovations. Rows start at
/// original index max(first_row(order), min_row).
///
/// Without cross terms (no regular and seasonal factor on the same side) the
/// problem is linear and solved by OLS. Otherwise OLS on the factor lags
/// alone seeds a Gauss-Newton refinement of the product model.
inline ArimaModel fit_differenced(DifferencedSeries& series, const ArimaOrder& order, std::size_t min_row) {
  validate_order(order);
  const auto& w = series.w();
  const std::size_t n_w = w.size();
  const auto k = static_cast<std::size_t>(order.parameter_count());
  if (n_w < 10 * k) {
    throw Error(ErrorCode::insufficient_data, "order " + to_string(order) + " needs " + std::to_string(10 * k) +
                                                  " points after differencing, have " + std::to_string(n_w));
  }
  if ((order.P > 0 || order.D > 0 || order.Q > 0) && n_w < 2 * static_cast<std::size_t>(order.s)) {
    throw Error(ErrorCode::insufficient_data, "seasonal order " + to_string(order) + " needs two seasons of data");
  }

  std::vector<double> e;
  if (order.has_ma()) e = series.stage_one();

  const auto offset = static_cast<std::size_t>(order.offset());
  const std::size_t start_row = std::max(first_row(order, series.long_ar_order), min_row);
  const std::size_t w_start = start_row - offset;
  const auto cols = static_cast<Eigen::Index>(k);
  if (w_start >= n_w || static_cast<Eigen::Index>(n_w - w_start) <= cols) {
    throw Error(ErrorCode::insufficient_data, "order " + to_string(order) + " leaves too few regression rows");
  }
  const std::string what = "ARIMA" + to_string(order);

  // Linear seed: all factor coefficients with cross products held at zero.
  const FactorParams zero = FactorParams::from_vector(Eigen::VectorXd::Zero(cols), order);
  Eigen::MatrixXd design;
  const Eigen::VectorXd target = stage_two_residuals(w, e, w_start, order, zero, &design);
  const auto seed = least_squares(design, target, what);
  FactorParams params = FactorParams::from_vector(seed.coef, order);
  double sse = seed.sse;

  const bool crossed = (order.p > 0 && order.P > 0) || (order.q > 0 && order.Q > 0);
  if (crossed) {
    Eigen::VectorXd beta = seed.coef;
    sse = stage_two_residuals(w, e, w_start, order, params, nullptr).squaredNorm();
    for (int iter = 0; iter < 100; ++iter) {
      Eigen::MatrixXd J;
      const Eigen::VectorXd resid = stage_two_residuals(w, e, w_start, order, params, &J);
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(J);
      if (qr.rank() < cols) break;
      const Eigen::VectorXd step = qr.solve(resid);
      bool improved = false;
      for (double scale = 1.0; scale > 1e-6; scale *= 0.5) {
        const Eigen::VectorXd trial = beta + scale * step;
        const auto trial_params = FactorParams::from_vector(trial, order);
        const double trial_sse = stage_two_residuals(w, e, w_start, order, trial_params, nullptr).squaredNorm();
        if (std::isfinite(trial_sse) && trial_sse < sse) {
          const double gain = sse - trial_sse;
          beta = trial;
          params = trial_params;
          sse = trial_sse;
          improved = gain > 1e-12 * std::max(1.0, sse);
          break;
        }
      }
      if (!improved) break;
    }
  }
  if (!std::isfinite(sse)) throw Error(ErrorCode::divergence, what + ": non-finite residual sum of squares");

  ArimaModel model;
  model.order = order;
  model.intercept = params.c;
  model.phi = params.phi;
  model.seasonal_phi = params.seasonal_phi;
  model.theta = params.theta;
  model.seasonal_theta = params.seasonal_theta;
  expand_product(model.phi, model.seasonal_phi, order.s, -1.0, model.ar_lags, model.ar_coef);
  expand_product(model.theta, model.seasonal_theta, order.s, 1.0, model.ma_lags, model.ma_coef);

  const auto rows = target.size();
  const double n = static_cast<double>(rows);
  // guard against round-off residue on exactly-fitted series
  const double scale = std::max(1.0, target.squaredNorm());
  model.sse = sse <= 1e-24 * scale ? 0.0 : sse;
  model.n_rows = static_cast<std::size_t>(rows);
  model.sigma2 = model.sse / n;
  model.aic = model.sse == 0.0 ? -std::numeric_limits<double>::infinity()
                               : n * std::log(model.sse / n) + 2.0 * static_cast<double>(k);
  model.levels = series.levels;
  model.diff_lags = series.diff_lags;
  model.innovations = e.empty() ? std::vector<double>(n_w, 0.0) : std::move(e);
  return model;
}

inline std::vector<double> training_values(const TimeSeries& train) {
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (!train.observed[i]) {
      throw Error(ErrorCode::training_window, "training window has unobserved index " + std::to_string(i));
    }
  }
  return train.values;
}

}  // namespace detail

struct ArimaFitOptions {
  /// 0 selects default_long_ar_order.
  int long_ar_order = 0;
  /// Regression rows start no earlier than this original-series index.
  std::size_t min_row = 0;
};

/// Hannan-Rissanen conditional least squares. AIC = n ln(SSE / n) + 2k with
/// n regression rows and k = p + q + P + Q + 1.
inline ArimaModel fit_arima(const TimeSeries& train, const ArimaOrder& order, const ArimaFitOptions& options = {}) {
  validate_order(order);
  const auto y = detail::training_values(train);
  const int m = options.long_ar_order > 0 ? options.long_ar_order : default_long_ar_order(y.size(), order.s);
  const auto offset = static_cast<std::size_t>(order.offset());
  if (y.size() <= offset + 1) {
    throw Error(ErrorCode::insufficient_data, "training window of " + std::to_string(y.size()) +
                                                  " points is shorter than the differencing span");
  }
  detail::DifferencedSeries series(y, order.d, order.D, order.s, m);
  return detail::fit_differenced(series, order, options.min_row);
}

struct SeasonalBounds {
  int P_max = 1;
  int D_max = 1;
  int Q_max = 1;
  int s = 24;

  bool operator==(const SeasonalBounds&) const = default;
};

struct OrderSelection {
  ArimaModel model;
  std::size_t candidates = 0;
  std::vector<std::string> failures;
};

/// Exhaustive AIC search over the bounded order lattice. All candidates share
/// one set of regression rows so their AIC values are comparable. Ties go to
/// the smaller p+q+P+Q, then the smaller d+D, then the lexicographically
/// smaller order.
inline OrderSelection select_model(const TimeSeries& train, int p_max, int d_max, int q_max,
                                   const std::optional<SeasonalBounds>& seasonal = std::nullopt) {
  if (p_max < 0 || d_max < 0 || q_max < 0) throw Error(ErrorCode::invalid_argument, "order bounds must be >= 0");
  if (seasonal && (seasonal->P_max < 0 || seasonal->D_max < 0 || seasonal->Q_max < 0 || seasonal->s < 2)) {
    throw Error(ErrorCode::invalid_argument, "seasonal bounds must be >= 0 with season length >= 2");
  }
  const auto y = detail::training_values(train);
  const int s = seasonal ? seasonal->s : 0;
  const int P_max = seasonal ? seasonal->P_max : 0;
  const int D_max = seasonal ? seasonal->D_max : 0;
  const int Q_max = seasonal ? seasonal->Q_max : 0;
  const int m = default_long_ar_order(y.size(), s);

  const ArimaOrder widest{p_max, d_max, q_max, P_max, D_max, Q_max, s};
  const std::size_t common_row = detail::first_row(widest, m);

  OrderSelection out;
  std::optional<ArimaModel> best;
  const auto key = [](const ArimaOrder& o) {
    return std::make_tuple(o.p + o.q + o.P + o.Q, o.d + o.D, o.p, o.d, o.q, o.P, o.D, o.Q);
  };
  for (int d = 0; d <= d_max; ++d) {
    for (int D = 0; D <= D_max; ++D) {
      const auto offset = static_cast<std::size_t>(d + D * s);
      if (y.size() <= offset + 1) {
        out.failures.push_back("d=" + std::to_string(d) + " D=" + std::to_string(D) + ": series too short");
        continue;
      }
      detail::DifferencedSeries series(y, d, D, s, m);
      for (int p = 0; p <= p_max; ++p) {
        for (int q = 0; q <= q_max; ++q) {
          for (int P = 0; P <= P_max; ++P) {
            for (int Q = 0; Q <= Q_max; ++Q) {
              const ArimaOrder order{p, d, q, P, D, Q, s};
              ++out.candidates;
              try {
                auto model = detail::fit_differenced(series, order, common_row);
                if (!best || model.aic < best->aic || (model.aic == best->aic && key(order) < key(best->order))) {
                  best = std::move(model);
                }
              } catch (const Error& err) {
                out.failures.push_back(to_string(order) + ": " + err.what());
              }
            }
          }
        }
      }
    }
  }
  if (!best) {
    std::string reasons;
    for (std::size_t i = 0; i < out.failures.size() && i < 8; ++i) reasons += "; " + out.failures[i];
    throw Error(ErrorCode::selection, "no ARIMA candidate could be fitted (" + std::to_string(out.candidates) +
                                          " tried" + reasons + ")");
  }
  out.model = std::move(*best);
  return out;
}

inline ArimaOrder select_order(const TimeSeries& train, int p_max, int d_max, int q_max,
                               const std::optional<SeasonalBounds>& seasonal = std::nullopt) {
  return select_model(train, p_max, d_max, q_max, seasonal).model.order;
}

struct ArimaParams {
  /// Samples of history before the gap used for training (six weeks hourly).
  std::int64_t train_span = 6 * 7 * 24;
  /// Shortest acceptable fully observed training run; 0 means train_span.
  std::int64_t min_train = 0;
  int p_max = 3;
  int d_max = 2;
  int q_max = 3;
  std::optional<SeasonalBounds> seasonal;
};

/// Selects and fits a model on the fully observed run directly before the
/// gap (at most train_span samples) and forecasts through the gap.
inline ImputationResult impute_arima(const TimeSeries& masked, const GapSpec& gap, const ArimaParams& params) {
  detail::check_gap_bounds(masked, gap);
  if (params.train_span < 1) throw Error(ErrorCode::invalid_argument, "train_span must be positive");
  const std::int64_t min_train = params.min_train > 0 ? std::min(params.min_train, params.train_span)
                                                      : params.train_span;
  std::int64_t begin = gap.start_index;
  const std::int64_t earliest = std::max<std::int64_t>(0, gap.start_index - params.train_span);
  while (begin > earliest && masked.observed[static_cast<std::size_t>(begin - 1)]) --begin;
  const std::int64_t span = gap.start_index - begin;
  if (span < min_train) {
    throw Error(ErrorCode::training_window, "only " + std::to_string(span) +
                                                " fully observed samples precede the gap at " +
                                                std::to_string(gap.start_index) + ", need " +
                                                std::to_string(min_train));
  }
  const TimeSeries train = slice(masked, begin, span);
  const auto selection = select_model(train, params.p_max, params.d_max, params.q_max, params.seasonal);
  return detail::finish(params.seasonal ? "sarima" : "arima", gap, selection.model.forecast(gap.length));
}

}  // namespace gapgauge
