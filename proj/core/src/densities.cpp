#include "skewvar/densities.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

namespace skewvar {

namespace {
constexpr double kLogPi = 1.1447298858494001741;
constexpr double kLn2 = 0.69314718055994530942;

void disable_gsl_abort() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}
}  // namespace

double normal_logpdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (kLogTwoPi + std::log(var) + d * d / var);
}

double gamma_logpdf(double x, double shape, double rate) {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double invgamma_logpdf(double x, double shape, double rate) {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return shape * std::log(rate) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - rate / x;
}

double student_t_logpdf(double x, double nu, double location, double scale) {
  const double z = (x - location) / scale;
  return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * (std::log(nu) + kLogPi) -
         std::log(scale) - 0.5 * (nu + 1.0) * std::log1p(z * z / nu);
}

double log_bessel_k(double v, double z) {
  if (!(z > 0.0) || v < 0.0) throw std::domain_error("log_bessel_k: need v >= 0, z > 0");
  disable_gsl_abort();
  gsl_sf_result result;
  const int status = gsl_sf_bessel_lnKnu_e(v, z, &result);
  if (status != GSL_SUCCESS || !std::isfinite(result.val)) {
    throw std::domain_error("log_bessel_k: evaluation failed for v=" + std::to_string(v) +
                            ", z=" + std::to_string(z));
  }
  return result.val;
}

namespace {

// log(e^z K_v(z)); lnKnu loses absolute precision once z is large
double log_bessel_k_scaled(double v, double z) {
  if (z < 500.0) return log_bessel_k(v, z) + z;
  gsl_sf_result result;
  const int status = gsl_sf_bessel_Knu_scaled_e(v, z, &result);
  if (status != GSL_SUCCESS || !(result.val > 0.0)) {
    throw std::domain_error("log_bessel_k: scaled evaluation failed for v=" + std::to_string(v) +
                            ", z=" + std::to_string(z));
  }
  return std::log(result.val);
}

double gh_core(int d, double log_chi, double z, double s_minus_z, double log_g, double logdet,
               double nu) {
  if (!std::isfinite(z)) return -std::numeric_limits<double>::infinity();
  const double lambda = 0.5 * (nu + d);
  return -0.5 * d * kLogTwoPi - 0.5 * logdet + 0.5 * nu * std::log(0.5 * nu) -
         std::lgamma(0.5 * nu) + kLn2 + 0.5 * lambda * (log_g - log_chi) + s_minus_z +
         log_bessel_k_scaled(lambda, z);
}

double student_core(int d, double log1p_q_nu, double s, double logdet, double nu) {
  const double lambda = 0.5 * (nu + d);
  return std::lgamma(lambda) - std::lgamma(0.5 * nu) - 0.5 * d * (std::log(nu) + kLogPi) -
         0.5 * logdet - lambda * log1p_q_nu + s;
}

}  // namespace

double ghskewt_logpdf_forms(int d, double q, double s, double g, double logdet, double nu) {
  if (!(nu > 2.0)) throw std::domain_error("GH skew-t requires nu > 2");
  const double chi = nu + q;
  const double z = std::sqrt(chi * g);
  // symmetric limit: K_l(z) ~ Gamma(l)/2 (2/z)^l, exact Student-t when g == 0
  if (z < 1e-7) return student_core(d, std::log1p(q / nu), s, logdet, nu);
  disable_gsl_abort();
  return gh_core(d, std::log(chi), z, s - z, std::log(g), logdet, nu);
}

double ghskewt_logpdf(double x, const GhSkewTParams& params) {
  if (!(params.nu > 2.0)) throw std::domain_error("GH skew-t requires nu > 2");
  if (!(params.scale > 0.0)) throw std::domain_error("GH skew-t requires scale > 0");
  const double nu = params.nu;
  const double r = (x - params.location) / params.scale;
  const double c = params.gamma / params.scale;
  const double root = std::hypot(std::sqrt(nu), r);  // sqrt(chi)
  const double z = std::abs(c) * root;
  const double logdet = 2.0 * std::log(params.scale);
  if (z < 1e-7) return student_core(1, std::log1p(r * r / nu), r * c, logdet, nu);
  // s - z without cancellation when r c > 0
  const double s_minus_z =
      r * c > 0.0 ? -std::abs(c) * nu / (std::abs(r) + root) : r * c - z;
  disable_gsl_abort();
  return gh_core(1, 2.0 * std::log(root), z, s_minus_z, 2.0 * std::log(std::abs(c)), logdet, nu);
}

}  // namespace skewvar
