#include "skewvar/minnesota.hpp"

#include <cmath>

#include "skewvar/design.hpp"
#include "skewvar/errors.hpp"

namespace skewvar {

double ar_residual_variance(const Eigen::VectorXd& series, int p) {
  const Eigen::Index n = series.size();
  auto fallback = [&](const char* why) {
    if (n < 3) throw DataError("series too short for a variance estimate");
    Eigen::VectorXd diff = series.tail(n - 1) - series.head(n - 1);
    const double mean = diff.mean();
    double var = (diff.array() - mean).square().sum() / static_cast<double>(diff.size() - 1);
    warn(std::string("AR(p) OLS fit ") + why +
         "; using the variance of the differenced series");
    if (!(var > 0.0)) var = 1.0;
    return var;
  };
  if (n - p <= p + 1) return fallback("has no residual degrees of freedom");
  const Design d = build_design(Eigen::MatrixXd(series), p);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.X);
  if (qr.rank() < d.X.cols()) return fallback("is singular");
  const Eigen::VectorXd beta = qr.solve(d.Y.col(0));
  const Eigen::VectorXd resid = d.Y.col(0) - d.X * beta;
  const double dof = static_cast<double>(d.T() - d.X.cols());
  const double var = resid.squaredNorm() / dof;
  if (!(var > 1e-300) || !std::isfinite(var)) return fallback("has zero residual variance");
  return var;
}

MinnesotaMoments minnesota_moments(const ModelSpec& spec, const PriorSpec& hyper,
                                   const Eigen::MatrixXd& values) {
  const int k = spec.k;
  const int m = spec.n_coef();
  if (values.cols() != k) throw DataError("data dimension does not match model k");
  MinnesotaMoments out;
  out.residual_variance.resize(k);
  for (int i = 0; i < k; ++i) {
    out.residual_variance(i) = ar_residual_variance(values.col(i), spec.p);
  }
  const auto& s2 = out.residual_variance;
  out.b0 = Eigen::VectorXd::Zero(k * m);
  out.vb0.resize(k * m);
  const double l1sq = hyper.l1 * hyper.l1;
  const double l2sq = hyper.l2 * hyper.l2;
  for (int i = 0; i < k; ++i) {
    out.vb0(i) = 100.0 * s2(i);  // intercept column
    for (int l = 1; l <= spec.p; ++l) {
      const double decay = 1.0 / (static_cast<double>(l) * l);
      for (int j = 0; j < k; ++j) {
        const int col = 1 + (l - 1) * k + j;
        const int idx = col * k + i;
        if (i == j) {
          out.vb0(idx) = l1sq * decay;
          if (l == 1) out.b0(idx) = 1.0;
        } else {
          out.vb0(idx) = l1sq * l2sq * decay * s2(i) / s2(j);
        }
      }
    }
  }
  return out;
}

PriorSpec default_prior(const ModelSpec& spec, const Eigen::MatrixXd& values, PriorSpec hyper) {
  const MinnesotaMoments mm = minnesota_moments(spec, hyper, values);
  hyper.b0 = mm.b0;
  hyper.vb0 = mm.vb0;
  hyper.h0_mean = mm.residual_variance.array().log();
  return hyper;
}

}  // namespace skewvar
