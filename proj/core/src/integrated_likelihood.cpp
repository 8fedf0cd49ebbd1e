#include "skewvar/integrated_likelihood.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "skewvar/densities.hpp"
#include "skewvar/errors.hpp"
#include "skewvar/shocks.hpp"

namespace skewvar {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogT4Const = -0.98082925301172623;  // log of the Student-t(4) density at 0

double random_walk_logpdf(const Eigen::VectorXd& z, double h0, double sigma2) {
  double lp = 0.0;
  double prev = h0;
  for (Eigen::Index t = 0; t < z.size(); ++t) {
    lp += normal_logpdf(z(t), prev, sigma2);
    prev = z(t);
  }
  return lp;
}

double gaussian_shock_logpdf(const Eigen::VectorXd& e, const Eigen::VectorXd& z) {
  double lp = 0.0;
  for (Eigen::Index t = 0; t < e.size(); ++t) {
    lp += -0.5 * (kLogTwoPi + z(t) + e(t) * e(t) * std::exp(-z(t)));
  }
  return lp;
}

// Draw from the Gibbs proposal for one period's mixing vector and return
// log IG-prior(xi) - log q(xi). `full` receives the k-vector diag(W_t).
double propose_mixing(const ModelSpec& spec, const ParameterDraw& theta, const Eigen::MatrixXd& A,
                      const Eigen::VectorXd& u, const Eigen::VectorXd& logh, double c, Rng& rng,
                      Eigen::VectorXd& full) {
  const int k = spec.k;
  const auto& nu = theta.nu;
  const Eigen::VectorXd stat = mixing_proposal_stat(spec, A, u, logh);
  full.resize(k);
  if (shared_mixing(spec.family)) {
    const double alpha = 0.5 * c * (nu(0) + k);
    const double beta = 0.5 * c * (nu(0) + stat(0));
    const double x = invgamma_sample(alpha, beta, rng);
    full.setConstant(x);
    return invgamma_logpdf(x, 0.5 * nu(0), 0.5 * nu(0)) - invgamma_logpdf(x, alpha, beta);
  }
  double lw = 0.0;
  for (int i = 0; i < k; ++i) {
    const double prior_half = 0.5 * nu(i);
    if (spec.family == Family::OST) {
      const double a = 0.5 * (nu(i) + 1.0);
      const double b = 0.5 * (stat(i) + nu(i));
      const double cc = 0.5 * theta.gamma(i) * theta.gamma(i) * std::exp(-logh(i));
      const double w = 2.0 * b / (a + std::sqrt(a * a + 4.0 * b * cc));
      const double mode = std::log(w);
      const double scale = 1.0 / std::sqrt(b / w + cc * w);
      if (std::isfinite(mode) && std::isfinite(scale) && scale > 0.0) {
        const double chi2 = gamma_sample(2.0, 0.5, rng);
        const double z = mode + scale * std_normal(rng) / std::sqrt(chi2 / 4.0);
        const double d = (z - mode) / scale;
        const double log_q = kLogT4Const - std::log(scale) - 2.5 * std::log1p(0.25 * d * d) - z;
        full(i) = std::exp(z);
        lw += invgamma_logpdf(full(i), prior_half, prior_half) - log_q;
        continue;
      }
    }
    const double alpha = 0.5 * c * (nu(i) + 1.0);
    const double beta = 0.5 * c * (nu(i) + stat(i));
    full(i) = invgamma_sample(alpha, beta, rng);
    lw += invgamma_logpdf(full(i), prior_half, prior_half) - invgamma_logpdf(full(i), alpha, beta);
  }
  return lw;
}

}  // namespace

LogMeanExp log_mean_exp(const Eigen::VectorXd& log_weights) {
  LogMeanExp out;
  const Eigen::Index n = log_weights.size();
  if (n == 0) throw NumericError("log_mean_exp of an empty vector");
  const double mx = log_weights.maxCoeff();
  if (std::isnan(mx)) throw NumericError("NaN importance weight");
  if (mx == kNegInf) {
    out.value = kNegInf;
    out.rel_variance = std::numeric_limits<double>::infinity();
    return out;
  }
  if (mx == std::numeric_limits<double>::infinity()) throw NumericError("infinite importance weight");
  const Eigen::ArrayXd w = (log_weights.array() - mx).exp();
  const double mean = w.mean();
  out.value = mx + std::log(mean);
  out.ess = w.sum() * w.sum() / w.square().sum();
  if (n > 1) {
    const double var = (w - mean).square().sum() / (n - 1.0);
    out.rel_variance = var / (n * mean * mean);
  }
  return out;
}

double log_conditional_likelihood(const ModelSpec& spec, const ParameterDraw& theta,
                                  const Design& design, const Eigen::MatrixXd& logh, Rng& rng,
                                  const ConditionalLikelihoodOptions& options) {
  const int k = spec.k;
  const int T = design.T();
  const Eigen::MatrixXd A = unit_lower_triangular(theta.a, k);
  const Eigen::MatrixXd U = residuals(design, theta.B);
  const Eigen::VectorXd Ag = A.triangularView<Eigen::UnitLower>() * theta.gamma;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k);
  Eigen::VectorXd full(k);
  Eigen::VectorXd lw(std::max(options.xi_samples, 1));
  double total = 0.0;
  for (int t = 0; t < T; ++t) {
    const Eigen::VectorXd u = U.row(t).transpose();
    const Eigen::VectorXd lh = logh.row(t).transpose();
    const Eigen::VectorXd e0 = A.triangularView<Eigen::UnitLower>() * u;
    switch (spec.family) {
      case Family::Gaussian:
        total += conditional_gaussian_logpdf(spec, A, theta.gamma, ones, lh, u);
        break;
      case Family::StudentT:
      case Family::SkewT: {
        const Eigen::ArrayXd hinv = (-lh.array()).exp();
        const double q = (e0.array().square() * hinv).sum();
        const double s = (e0.array() * Ag.array() * hinv).sum();
        const double g = (Ag.array().square() * hinv).sum();
        total += ghskewt_logpdf_forms(k, q, s, g, lh.sum(), theta.nu(0));
        break;
      }
      case Family::OT:
      case Family::OST:
        for (int i = 0; i < k; ++i) {
          GhSkewTParams par{0.0, std::exp(0.5 * lh(i)), theta.gamma(i), theta.nu(i)};
          total += ghskewt_logpdf(e0(i), par);
        }
        break;
      case Family::MT:
      case Family::MST: {
        for (Eigen::Index j = 0; j < lw.size(); ++j) {
          lw(j) = propose_mixing(spec, theta, A, u, lh, options.c_xi, rng, full);
          lw(j) += conditional_gaussian_logpdf(spec, A, theta.gamma, full, lh, u);
        }
        total += log_mean_exp(lw).value;
        break;
      }
    }
  }
  return total;
}

double log_volatility_objective(const Eigen::VectorXd& z, const Eigen::VectorXd& e_sq, double h0,
                                double sigma2) {
  double f = 0.0;
  double prev = h0;
  for (Eigen::Index t = 0; t < z.size(); ++t) {
    const double d = z(t) - prev;
    f += -0.5 * z(t) - 0.5 * e_sq(t) * std::exp(-z(t)) - 0.5 * d * d / sigma2;
    prev = z(t);
  }
  return f;
}

VolatilityMode find_volatility_mode(const Eigen::VectorXd& e_sq, double h0, double sigma2,
                                    int max_iter) {
  if (!(sigma2 > 0.0)) throw NumericError("volatility mode needs sigma2 > 0");
  const Eigen::Index T = e_sq.size();
  VolatilityMode vm;
  vm.mode = Eigen::VectorXd::Constant(T, h0);
  vm.hess_diag.resize(T);
  vm.hess_offdiag = Eigen::VectorXd::Constant(std::max<Eigen::Index>(T - 1, 0), -1.0 / sigma2);
  Eigen::VectorXd grad(T), step(T), c(T), dd(T);
  auto& z = vm.mode;
  auto update_hessian = [&] {
    for (Eigen::Index t = 0; t < T; ++t) {
      vm.hess_diag(t) =
          0.5 * e_sq(t) * std::exp(-z(t)) + (t + 1 < T ? 2.0 : 1.0) / sigma2;
    }
  };
  double f = log_volatility_objective(z, e_sq, h0, sigma2);
  for (int it = 1; it <= max_iter; ++it) {
    for (Eigen::Index t = 0; t < T; ++t) {
      const double prev = t == 0 ? h0 : z(t - 1);
      grad(t) = -0.5 + 0.5 * e_sq(t) * std::exp(-z(t)) - (z(t) - prev) / sigma2;
      if (t + 1 < T) grad(t) += (z(t + 1) - z(t)) / sigma2;
    }
    update_hessian();
    // Thomas algorithm for (negative Hessian) step = grad
    const double off = -1.0 / sigma2;
    for (Eigen::Index t = 0; t < T; ++t) {
      const double denom = vm.hess_diag(t) - (t > 0 ? off * c(t - 1) : 0.0);
      c(t) = off / denom;
      dd(t) = (grad(t) - (t > 0 ? off * dd(t - 1) : 0.0)) / denom;
    }
    for (Eigen::Index t = T - 1; t >= 0; --t) {
      step(t) = dd(t) - (t + 1 < T ? c(t) * step(t + 1) : 0.0);
    }
    double scale = 1.0;
    Eigen::VectorXd next = z + step;
    double f_next = log_volatility_objective(next, e_sq, h0, sigma2);
    while (!(f_next >= f - 1e-12 * std::abs(f)) && scale > 1e-10) {
      scale *= 0.5;
      next = z + scale * step;
      f_next = log_volatility_objective(next, e_sq, h0, sigma2);
    }
    z = next;
    f = f_next;
    vm.iterations = it;
    if ((scale * step).cwiseAbs().maxCoeff() < 1e-9) {
      update_hessian();
      return vm;
    }
  }
  throw NumericError("volatility mode did not converge in " + std::to_string(max_iter) +
                     " iterations");
}

BandedGaussian::BandedGaussian(const VolatilityMode& mode) : mean_(mode.mode) {
  const Eigen::Index T = mean_.size();
  chol_diag_.resize(T);
  chol_sub_.resize(std::max<Eigen::Index>(T - 1, 0));
  for (Eigen::Index t = 0; t < T; ++t) {
    double d = mode.hess_diag(t);
    if (t > 0) {
      chol_sub_(t - 1) = mode.hess_offdiag(t - 1) / chol_diag_(t - 1);
      d -= chol_sub_(t - 1) * chol_sub_(t - 1);
    }
    if (!(d > 0.0)) throw NumericError("volatility proposal precision is not positive definite");
    chol_diag_(t) = std::sqrt(d);
  }
  log_det_half_ = chol_diag_.array().log().sum();
}

Eigen::VectorXd BandedGaussian::sample(Rng& rng) const {
  const Eigen::Index T = mean_.size();
  Eigen::VectorXd x(T);
  for (Eigen::Index t = T - 1; t >= 0; --t) {
    double r = std_normal(rng);
    if (t + 1 < T) r -= chol_sub_(t) * x(t + 1);
    x(t) = r / chol_diag_(t);
  }
  return mean_ + x;
}

double BandedGaussian::log_density(const Eigen::VectorXd& z) const {
  const Eigen::Index T = mean_.size();
  double q = 0.0;
  for (Eigen::Index t = 0; t < T; ++t) {
    double v = chol_diag_(t) * (z(t) - mean_(t));
    if (t + 1 < T) v += chol_sub_(t) * (z(t + 1) - mean_(t + 1));
    q += v * v;
  }
  return -0.5 * static_cast<double>(T) * kLogTwoPi + log_det_half_ - 0.5 * q;
}

IntegratedLikelihood integrated_likelihood_A1(const ModelSpec& spec, const ParameterDraw& theta,
                                              const Design& design,
                                              const Eigen::MatrixXd& xi_mean, Rng& rng,
                                              const IntegratedLikelihoodOptions& options) {
  const int k = spec.k;
  const int T = design.T();
  IntegratedLikelihood out;
  if (!spec.sv) {
    const Eigen::MatrixXd logh = theta.h0.transpose().replicate(T, 1);
    out.log_value = log_conditional_likelihood(spec, theta, design, logh, rng, options.conditional);
    out.ess = 1.0;
    out.samples = 1;
    return out;
  }
  const Eigen::MatrixXd A = unit_lower_triangular(theta.a, k);
  const Eigen::MatrixXd U = residuals(design, theta.B);
  Eigen::MatrixXd e_sq(T, k);
  for (int t = 0; t < T; ++t) {
    const Eigen::VectorXd xi = expand_xi(spec, xi_mean, t);
    e_sq.row(t) =
        structural_shocks(spec, A, theta.gamma, xi, U.row(t).transpose()).array().square().transpose();
  }
  std::vector<BandedGaussian> proposals;
  for (int i = 0; i < k; ++i) {
    proposals.emplace_back(find_volatility_mode(e_sq.col(i), theta.h0(i), theta.sigma2(i)));
  }
  const int L = std::max(options.samples, 1);
  Eigen::VectorXd lw(L);
  Eigen::MatrixXd logh(T, k);
  for (int l = 0; l < L; ++l) {
    double w = 0.0;
    for (int i = 0; i < k; ++i) {
      const Eigen::VectorXd z = proposals[i].sample(rng);
      logh.col(i) = z;
      w += random_walk_logpdf(z, theta.h0(i), theta.sigma2(i)) - proposals[i].log_density(z);
    }
    lw(l) = w + log_conditional_likelihood(spec, theta, design, logh, rng, options.conditional);
  }
  const LogMeanExp lme = log_mean_exp(lw);
  out.log_value = lme.value;
  out.ess = lme.ess;
  out.samples = L;
  out.low_ess = lme.ess < 10.0;
  return out;
}

IntegratedLikelihood integrated_likelihood_A2(const ModelSpec& spec, const ParameterDraw& theta,
                                              const Design& design,
                                              const Eigen::MatrixXd& h_mean, Rng& rng,
                                              const IntegratedLikelihoodOptions& options) {
  const int k = spec.k;
  const int T = design.T();
  const Eigen::MatrixXd A = unit_lower_triangular(theta.a, k);
  const Eigen::MatrixXd U = residuals(design, theta.B);
  const bool mixing = has_mixing(spec.family);
  const int M = mixing ? std::max(options.samples, 1) : 1;
  const int R = std::max(options.inner_samples, 1);

  Eigen::MatrixXd xi_full = Eigen::MatrixXd::Ones(T, k);
  Eigen::MatrixXd e(T, k);
  Eigen::VectorXd full(k), inner(R), lw(M);
  bool low_inner = false;
  for (int mdx = 0; mdx < M; ++mdx) {
    double w = 0.0;
    if (mixing) {
      for (int t = 0; t < T; ++t) {
        const Eigen::VectorXd lh = h_mean.row(t).transpose().array().log();
        w += propose_mixing(spec, theta, A, U.row(t).transpose(), lh, options.conditional.c_xi,
                            rng, full);
        xi_full.row(t) = full.transpose();
      }
    }
    for (int t = 0; t < T; ++t) {
      const Eigen::VectorXd xi = xi_full.row(t).transpose();
      e.row(t) = structural_shocks(spec, A, theta.gamma, xi, U.row(t).transpose()).transpose();
      w -= 0.5 * xi.array().log().sum();
    }
    for (int i = 0; i < k; ++i) {
      if (!spec.sv) {
        const Eigen::VectorXd z = Eigen::VectorXd::Constant(T, theta.h0(i));
        w += gaussian_shock_logpdf(e.col(i), z);
        continue;
      }
      const Eigen::VectorXd esq = e.col(i).array().square();
      const BandedGaussian q(find_volatility_mode(esq, theta.h0(i), theta.sigma2(i)));
      for (int r = 0; r < R; ++r) {
        const Eigen::VectorXd z = q.sample(rng);
        inner(r) = gaussian_shock_logpdf(e.col(i), z) +
                   random_walk_logpdf(z, theta.h0(i), theta.sigma2(i)) - q.log_density(z);
      }
      const LogMeanExp lme = log_mean_exp(inner);
      if (lme.ess < 10.0 && R >= 10) low_inner = true;
      w += lme.value;
    }
    lw(mdx) = w;
  }
  const LogMeanExp lme = log_mean_exp(lw);
  IntegratedLikelihood out;
  out.log_value = lme.value;
  out.ess = lme.ess;
  out.samples = M;
  out.low_ess = (mixing && lme.ess < 10.0) || low_inner;
  return out;
}

}  // namespace skewvar
