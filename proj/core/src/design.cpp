#include "skewvar/design.hpp"

#include "skewvar/errors.hpp"

namespace skewvar {

Design build_design(const Eigen::MatrixXd& values, int p) {
  const int T = static_cast<int>(values.rows());
  const int k = static_cast<int>(values.cols());
  if (p < 0) throw ConfigError("lag order must be non-negative");
  if (T <= p) {
    throw DataError("insufficient data: " + std::to_string(T) + " rows for " +
                    std::to_string(p) + " lags");
  }
  Design d;
  d.Y = values.bottomRows(T - p);
  d.X.resize(T - p, 1 + k * p);
  d.X.col(0).setOnes();
  for (int t = p; t < T; ++t) {
    for (int l = 1; l <= p; ++l) {
      d.X.block(t - p, 1 + (l - 1) * k, 1, k) = values.row(t - l);
    }
  }
  return d;
}

Design build_design(const Dataset& data, int p) { return build_design(data.values, p); }

Eigen::VectorXd lag_vector(const Eigen::MatrixXd& recent, int p) {
  const int k = static_cast<int>(recent.cols());
  if (recent.rows() < p) throw DataError("not enough rows to build lags");
  Eigen::VectorXd x(1 + k * p);
  x(0) = 1.0;
  const Eigen::Index last = recent.rows() - 1;
  for (int l = 1; l <= p; ++l) {
    x.segment(1 + (l - 1) * k, k) = recent.row(last - (l - 1)).transpose();
  }
  return x;
}

}  // namespace skewvar
