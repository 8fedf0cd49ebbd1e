#pragma once

#include <Eigen/Dense>

#include "skewvar/model.hpp"

namespace skewvar {

struct MinnesotaMoments {
  Eigen::VectorXd b0;
  Eigen::VectorXd vb0;
  Eigen::VectorXd residual_variance;  // AR(p) OLS variance per equation
};

/// Residual variance of a univariate AR(p) with intercept fitted by OLS.
/// Falls back to the variance of the differenced series (with a warning)
/// when the fit is singular.
double ar_residual_variance(const Eigen::VectorXd& series, int p);

/// Minnesota moments for vec(B): mean 1 on own first lags, zero elsewhere;
/// variance l1^2/l^2 on own lag l, (l1 l2 / l)^2 s_i^2/s_j^2 on lag l of
/// variable j in equation i, and 100 s_i^2 on the intercept.
MinnesotaMoments minnesota_moments(const ModelSpec& spec, const PriorSpec& hyper,
                                   const Eigen::MatrixXd& values);

/// Hyperparameters from `hyper` with Minnesota moments and the initial
/// log-volatility means log s_i^2 filled in from the data.
PriorSpec default_prior(const ModelSpec& spec, const Eigen::MatrixXd& values,
                        PriorSpec hyper = {});

}  // namespace skewvar
