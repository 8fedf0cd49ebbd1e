#pragma once

#include <Eigen/Dense>

#include "skewvar/design.hpp"
#include "skewvar/model.hpp"
#include "skewvar/random.hpp"

namespace skewvar {

/// log p(y | theta_1, h) given all log-volatilities (T x k). Closed forms for
/// Gaussian, Student-t, Skew-t, OT and OST; MT and MST integrate each
/// period's mixing vector by importance sampling with the Gibbs proposal.
struct ConditionalLikelihoodOptions {
  int xi_samples = 50;  // per period, MT/MST only
  double c_xi = 0.75;
};
double log_conditional_likelihood(const ModelSpec& spec, const ParameterDraw& theta,
                                  const Design& design, const Eigen::MatrixXd& logh,
                                  Rng& rng,
                                  const ConditionalLikelihoodOptions& options = {});

/// Mode of one equation's log-volatility path z_1..z_T under
///   sum_t [-z_t/2 - e_t^2 exp(-z_t)/2] - sum_t (z_t - z_{t-1})^2 / (2 sigma^2)
/// with z_0 = h0, plus the tridiagonal negative Hessian at the mode.
struct VolatilityMode {
  Eigen::VectorXd mode;
  Eigen::VectorXd hess_diag;     // negative Hessian, diagonal
  Eigen::VectorXd hess_offdiag;  // negative Hessian, first off-diagonal
  int iterations = 0;
};

double log_volatility_objective(const Eigen::VectorXd& z, const Eigen::VectorXd& e_sq,
                                double h0, double sigma2);
/// Banded Newton iteration; throws NumericError after max_iter iterations.
VolatilityMode find_volatility_mode(const Eigen::VectorXd& e_sq, double h0,
                                    double sigma2, int max_iter = 200);

/// Gaussian importance density N(mode, H^{-1}) with tridiagonal precision H.
class BandedGaussian {
 public:
  explicit BandedGaussian(const VolatilityMode& mode);
  Eigen::VectorXd sample(Rng& rng) const;
  double log_density(const Eigen::VectorXd& z) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd chol_diag_;  // H = L L', L lower bidiagonal
  Eigen::VectorXd chol_sub_;
  double log_det_half_ = 0.0;
};

struct IntegratedLikelihood {
  double log_value = 0.0;
  double ess = 0.0;
  int samples = 0;
  bool low_ess = false;  // ess < 10
};

struct IntegratedLikelihoodOptions {
  int samples = 100;           // L (A1) or M (A2)
  int inner_samples = 50;      // inner h draws per xi draw in A2 with SV
  ConditionalLikelihoodOptions conditional;
};

/// Importance sampling over the log-volatility paths with a Laplace proposal
/// located at the mode of log p(h | y, theta_1) computed with xi fixed at
/// `xi_mean`. Without SV the volatilities are fixed at h0 and this returns
/// the conditional likelihood directly.
IntegratedLikelihood integrated_likelihood_A1(const ModelSpec& spec,
                                              const ParameterDraw& theta,
                                              const Design& design,
                                              const Eigen::MatrixXd& xi_mean,
                                              Rng& rng,
                                              const IntegratedLikelihoodOptions& options = {});

/// Importance sampling over the mixing variables with the Gibbs proposal
/// evaluated at the posterior mean volatility `h_mean` (T x k, levels).
/// Given xi the likelihood is Gaussian; with SV the volatilities are
/// integrated by an inner Laplace importance sampler.
IntegratedLikelihood integrated_likelihood_A2(const ModelSpec& spec,
                                              const ParameterDraw& theta,
                                              const Design& design,
                                              const Eigen::MatrixXd& h_mean,
                                              Rng& rng,
                                              const IntegratedLikelihoodOptions& options = {});

/// log mean exp of the entries plus the effective sample size of exp(x).
struct LogMeanExp {
  double value = 0.0;
  double ess = 0.0;
  double rel_variance = 0.0;  // Var(w) / (n mean(w)^2), delta-method Var(log mean)
};
LogMeanExp log_mean_exp(const Eigen::VectorXd& log_weights);

}  // namespace skewvar
