#include "skewvar/shocks.hpp"

#include <cmath>

#include "skewvar/densities.hpp"

namespace skewvar {

Eigen::MatrixXd residuals(const Design& design, const Eigen::MatrixXd& B) {
  return design.Y - design.X * B.transpose();
}

Eigen::VectorXd expand_xi(const ModelSpec& spec, const Eigen::MatrixXd& xi, int t) {
  if (!has_mixing(spec.family)) return Eigen::VectorXd::Ones(spec.k);
  if (shared_mixing(spec.family)) return Eigen::VectorXd::Constant(spec.k, xi(t, 0));
  return xi.row(t).transpose();
}

Eigen::VectorXd skew_mean(const ModelSpec& spec, const Eigen::MatrixXd& A,
                          const Eigen::VectorXd& gamma, const Eigen::VectorXd& xi) {
  Eigen::VectorXd m = xi.cwiseProduct(gamma);
  if (orthogonal_mixing(spec.family)) {
    A.triangularView<Eigen::UnitLower>().solveInPlace(m);
  }
  return m;
}

Eigen::VectorXd structural_shocks(const ModelSpec& spec, const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& gamma, const Eigen::VectorXd& xi,
                                  const Eigen::VectorXd& u) {
  if (!has_mixing(spec.family)) return A.triangularView<Eigen::UnitLower>() * u;
  if (orthogonal_mixing(spec.family)) {
    Eigen::VectorXd e = A.triangularView<Eigen::UnitLower>() * u;
    return (e - xi.cwiseProduct(gamma)).cwiseQuotient(xi.cwiseSqrt());
  }
  const Eigen::VectorXd scaled = (u - xi.cwiseProduct(gamma)).cwiseQuotient(xi.cwiseSqrt());
  return A.triangularView<Eigen::UnitLower>() * scaled;
}

Eigen::MatrixXd precision_factor(const ModelSpec& spec, const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& xi, const Eigen::VectorXd& logh) {
  const int k = spec.k;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(k, k);
  const bool ortho = orthogonal_mixing(spec.family);
  for (int i = 0; i < k; ++i) {
    const double hi = std::exp(-0.5 * logh(i));
    for (int j = 0; j <= i; ++j) {
      const double w = ortho ? xi(i) : xi(j);
      Q(i, j) = A(i, j) * hi / std::sqrt(w);
    }
  }
  return Q;
}

Eigen::MatrixXd covariance_factor(const ModelSpec& spec, const Eigen::MatrixXd& A_inv,
                                  const Eigen::VectorXd& xi, const Eigen::VectorXd& logh) {
  const int k = spec.k;
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(k, k);
  const bool ortho = orthogonal_mixing(spec.family);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double w = ortho ? xi(j) : xi(i);
      F(i, j) = A_inv(i, j) * std::sqrt(w) * std::exp(0.5 * logh(j));
    }
  }
  return F;
}

double conditional_gaussian_logpdf(const ModelSpec& spec, const Eigen::MatrixXd& A,
                                   const Eigen::VectorXd& gamma, const Eigen::VectorXd& xi,
                                   const Eigen::VectorXd& logh, const Eigen::VectorXd& u) {
  const Eigen::VectorXd e = structural_shocks(spec, A, gamma, xi, u);
  double lp = 0.0;
  for (int i = 0; i < spec.k; ++i) {
    lp += -0.5 * (kLogTwoPi + logh(i) + std::log(xi(i)) + e(i) * e(i) * std::exp(-logh(i)));
  }
  return lp;
}

Eigen::VectorXd mixing_proposal_stat(const ModelSpec& spec, const Eigen::MatrixXd& A,
                                     const Eigen::VectorXd& u, const Eigen::VectorXd& logh) {
  const Eigen::ArrayXd hinv = (-logh.array()).exp();
  if (spec.family == Family::MT || spec.family == Family::MST) {
    const Eigen::ArrayXd diag = (A.array().square().colwise() * hinv).colwise().sum().transpose();
    return (u.array().square() * diag).matrix();
  }
  const Eigen::VectorXd e = A.triangularView<Eigen::UnitLower>() * u;
  const Eigen::ArrayXd q = e.array().square() * hinv;
  if (shared_mixing(spec.family)) return Eigen::VectorXd::Constant(1, q.sum());
  return q.matrix();
}

}  // namespace skewvar
