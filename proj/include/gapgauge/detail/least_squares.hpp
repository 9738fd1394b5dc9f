#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "gapgauge/error.hpp"

namespace gapgauge::detail {

struct LeastSquaresFit {
  Eigen::VectorXd coef;
  double sse = 0.0;
};

/// Ordinary least squares via column-pivoted QR. Throws rank_deficiency when
/// the design does not have full column rank.
inline LeastSquaresFit least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& target,
                                     const std::string& what) {
  if (design.rows() < design.cols()) {
    throw Error(ErrorCode::rank_deficiency, what + ": " + std::to_string(design.rows()) + " rows for " +
                                                std::to_string(design.cols()) + " unknowns");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  // Relative threshold on the R diagonal; exact collinearity (zero columns,
  // repeated regressors) lands far below it.
  qr.setThreshold(1e-10);
  if (qr.rank() < design.cols()) {
    throw Error(ErrorCode::rank_deficiency, what + ": design matrix has rank " + std::to_string(qr.rank()) +
                                                " < " + std::to_string(design.cols()));
  }
  LeastSquaresFit fit;
  fit.coef = qr.solve(target);
  fit.sse = (design * fit.coef - target).squaredNorm();
  if (!std::isfinite(fit.sse)) throw Error(ErrorCode::divergence, what + ": non-finite residual sum of squares");
  return fit;
}

}  // namespace gapgauge::detail
