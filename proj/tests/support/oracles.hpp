#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Asymptotic Kolmogorov tail P(K > lambda).
double kolmogorov_q(double lambda);

/// One-sample KS test against a continuous CDF; returns the p-value.
double ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf,
                     double* statistic = nullptr);

/// Two-sample KS p-value. n_eff_b, when positive, replaces the size of the
/// second sample (autocorrelated chains).
double ks_two_sample(std::vector<double> a, std::vector<double> b, double n_eff_b = 0.0,
                     double* statistic = nullptr);

/// Effective sample size from batch means.
double effective_size(const std::vector<double>& x);

/// Upper binomial tail P(X >= x) for X ~ Bin(n, p).
double binomial_upper_tail(int x, int n, double p);

/// Moments of a density known up to a constant, by trapezoid on a uniform grid.
struct GridMoments {
  double log_norm = 0.0;  // log of the integral of exp(logf)
  double mean = 0.0;
  double var = 0.0;
};
GridMoments grid_moments(const std::function<double(double)>& logf, double lo, double hi,
                         int n);

/// Mean vector and covariance of a bivariate density on a uniform grid.
struct GridMoments2 {
  Eigen::Vector2d mean;
  Eigen::Matrix2d cov;
};
GridMoments2 grid_moments2(const std::function<double(double, double)>& logf,
                           Eigen::Vector2d lo, Eigen::Vector2d hi, int n);

/// log of the integral of exp(logf) over the box [lo, hi] by tensor trapezoid
/// with n points per axis.
double log_integral_grid(const std::function<double(const Eigen::VectorXd&)>& logf,
                         const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int n);

}  // namespace oracle
