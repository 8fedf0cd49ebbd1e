#pragma once

#include <vector>

#include <Eigen/Dense>

#include "skewvar/model.hpp"
#include "skewvar/random.hpp"

namespace skewvar {

/// Maximum-likelihood Gamma(shape, rate) fit; Newton on
/// log(a) - digamma(a) = log(mean) - mean(log x). Throws NumericError for
/// degenerate (constant) samples.
struct GammaFit {
  double shape = 1.0;
  double rate = 1.0;
};
GammaFit fit_gamma_mle(const Eigen::VectorXd& x, double tol = 1e-10);
/// Inverse-gamma MLE via the Gamma fit of 1/x.
GammaFit fit_invgamma_mle(const Eigen::VectorXd& x, double tol = 1e-10);

/// Importance density for the static parameters: a multivariate normal on
/// (vec B, a, gamma), independent Gammas on nu, independent inverse Gammas
/// on sigma^2 and on the initial volatility exp(h0).
struct ProposalFamily {
  ModelSpec spec;
  Eigen::VectorXd gauss_mean;
  Eigen::MatrixXd gauss_cov;
  Eigen::MatrixXd gauss_chol;  // lower
  std::vector<GammaFit> nu;
  std::vector<GammaFit> sigma2;
  std::vector<GammaFit> h0_level;
  bool ridge_added = false;

  ParameterDraw sample(Rng& rng) const;
  double log_density(const ParameterDraw& theta) const;
};

/// Length of the Gaussian block (vec B, a, gamma).
int gaussian_block_size(const ModelSpec& spec);
Eigen::VectorXd pack_gaussian_block(const ModelSpec& spec, const ParameterDraw& theta);

/// Cross-entropy fit: sample mean/covariance for the Gaussian block and
/// Gamma / inverse-gamma MLEs for the positive parameters. Requires at least
/// `min_draws` draws.
ProposalFamily fit_proposal(const ModelSpec& spec,
                            const std::vector<ParameterDraw>& draws,
                            int min_draws = 1000);

/// log p(theta_1) under the prior, including the truncation of nu to (2, inf).
double log_prior_density(const ModelSpec& spec, const PriorSpec& prior,
                         const ParameterDraw& theta);

}  // namespace skewvar
