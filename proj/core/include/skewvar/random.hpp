#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace skewvar {

using Rng = std::mt19937_64;

/// Independent stream `stream` of the generator family rooted at `seed`.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

double std_normal(Rng& rng);
double uniform01(Rng& rng);

/// mean + L z with z standard normal; L is a lower Cholesky factor.
Eigen::VectorXd mvn_sample(const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& chol_lower, Rng& rng);

/// Draw from N(mean, P^{-1}) given the lower Cholesky factor of P.
Eigen::VectorXd mvn_sample_precision(const Eigen::VectorXd& mean,
                                     const Eigen::MatrixXd& precision_chol_lower,
                                     Rng& rng);

/// Gamma with shape/rate parameterization.
double gamma_sample(double shape, double rate, Rng& rng);
/// Inverse gamma: 1/x ~ Gamma(shape, rate).
double invgamma_sample(double shape, double rate, Rng& rng);

}  // namespace skewvar
