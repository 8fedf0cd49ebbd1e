#pragma once

#include <Eigen/Dense>

#include "skewvar/dataset.hpp"

namespace skewvar {

/// Regression form Y = X B' + U of a VAR(p).
struct Design {
  Eigen::MatrixXd Y;  // (T - p) x k, rows y_{p+1}, ..., y_T
  Eigen::MatrixXd X;  // (T - p) x (1 + kp), rows (1, y'_{t-1}, ..., y'_{t-p})

  int T() const { return static_cast<int>(Y.rows()); }
  int k() const { return static_cast<int>(Y.cols()); }
};

/// The first p rows only serve as lags. Throws DataError when T <= p.
Design build_design(const Eigen::MatrixXd& values, int p);
Design build_design(const Dataset& data, int p);

/// Regressor vector (1, y'_{t}, ..., y'_{t-p+1}) built from the last p rows
/// of `recent` (most recent last).
Eigen::VectorXd lag_vector(const Eigen::MatrixXd& recent, int p);

}  // namespace skewvar
