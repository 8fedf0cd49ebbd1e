#pragma once

#include <Eigen/Dense>

namespace skewvar {

inline constexpr double kLogTwoPi = 1.8378770664093454836;

double normal_logpdf(double x, double mean, double var);
double gamma_logpdf(double x, double shape, double rate);
double invgamma_logpdf(double x, double shape, double rate);
double student_t_logpdf(double x, double nu, double location = 0.0,
                        double scale = 1.0);

/// log K_v(z) for v >= 0, z > 0, without underflow for large z.
double log_bessel_k(double v, double z);

/// Univariate GH skew-t: X = location + xi gamma + scale sqrt(xi) Z with
/// xi ~ IG(nu/2, nu/2) and Z standard normal.
struct GhSkewTParams {
  double location = 0.0;
  double scale = 1.0;
  double gamma = 0.0;
  double nu = 10.0;
};

double ghskewt_logpdf(double x, const GhSkewTParams& params);

/// Log density of the d-variate GH skew-t written through its quadratic
/// forms: q = (x-mu)' S^{-1} (x-mu), s = (x-mu)' S^{-1} gamma,
/// g = gamma' S^{-1} gamma, and log|S|. With g == 0 this is the
/// multivariate Student-t density.
double ghskewt_logpdf_forms(int d, double q, double s, double g,
                            double logdet, double nu);

}  // namespace skewvar
