#include "skewvar/proposal.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "skewvar/densities.hpp"
#include "skewvar/errors.hpp"

namespace skewvar {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double mvn_logpdf_chol(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                       const Eigen::MatrixXd& chol_lower) {
  const Eigen::VectorXd z = chol_lower.triangularView<Eigen::Lower>().solve(x - mean);
  const double n = static_cast<double>(x.size());
  return -0.5 * n * kLogTwoPi - chol_lower.diagonal().array().log().sum() - 0.5 * z.squaredNorm();
}

}  // namespace

GammaFit fit_gamma_mle(const Eigen::VectorXd& x, double tol) {
  if (x.size() < 2) throw NumericError("gamma fit needs at least two values");
  if ((x.array() <= 0.0).any() || !x.allFinite()) {
    throw NumericError("gamma fit needs positive finite values");
  }
  const double mean = x.mean();
  const double s = std::log(mean) - x.array().log().mean();
  if (!(s > 1e-14)) throw NumericError("gamma fit: sample is (nearly) constant");
  double a = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
  for (int it = 0; it < 100; ++it) {
    const double f = std::log(a) - boost::math::digamma(a) - s;
    const double fp = 1.0 / a - boost::math::trigamma(a);
    double next = a - f / fp;
    if (!(next > 0.0)) next = 0.5 * a;
    const double change = std::abs(next - a);
    a = next;
    if (change < tol * std::max(1.0, a)) break;
  }
  return GammaFit{a, a / mean};
}

GammaFit fit_invgamma_mle(const Eigen::VectorXd& x, double tol) {
  return fit_gamma_mle(x.cwiseInverse(), tol);
}

int gaussian_block_size(const ModelSpec& spec) {
  return spec.k * spec.n_coef() + spec.n_a() + (has_skew(spec.family) ? spec.k : 0);
}

Eigen::VectorXd pack_gaussian_block(const ModelSpec& spec, const ParameterDraw& theta) {
  Eigen::VectorXd v(gaussian_block_size(spec));
  const int nb = spec.k * spec.n_coef();
  v.head(nb) = Eigen::Map<const Eigen::VectorXd>(theta.B.data(), nb);
  v.segment(nb, spec.n_a()) = theta.a;
  if (has_skew(spec.family)) v.tail(spec.k) = theta.gamma;
  return v;
}

ProposalFamily fit_proposal(const ModelSpec& spec, const std::vector<ParameterDraw>& draws,
                            int min_draws) {
  const int n = static_cast<int>(draws.size());
  if (n < min_draws || n < 2) {
    throw ConfigError("proposal fit needs at least " + std::to_string(min_draws) +
                      " posterior draws, got " + std::to_string(n));
  }
  ProposalFamily f;
  f.spec = spec;
  const int dim = gaussian_block_size(spec);
  Eigen::MatrixXd G(n, dim);
  for (int j = 0; j < n; ++j) G.row(j) = pack_gaussian_block(spec, draws[j]).transpose();
  f.gauss_mean = G.colwise().mean().transpose();
  const Eigen::MatrixXd centered = G.rowwise() - f.gauss_mean.transpose();
  f.gauss_cov = centered.transpose() * centered / (n - 1.0);
  Eigen::LLT<Eigen::MatrixXd> llt(f.gauss_cov);
  if (llt.info() != Eigen::Success) {
    const double ridge = 1e-8 * std::max(f.gauss_cov.diagonal().mean(), 1e-12);
    f.gauss_cov.diagonal().array() += ridge;
    llt.compute(f.gauss_cov);
    f.ridge_added = true;
    warn("proposal covariance not positive definite; added ridge " + std::to_string(ridge));
    if (llt.info() != Eigen::Success) throw NumericError("proposal covariance is singular");
  }
  f.gauss_chol = llt.matrixL();

  Eigen::VectorXd col(n);
  for (int g = 0; g < spec.n_nu(); ++g) {
    for (int j = 0; j < n; ++j) col(j) = draws[j].nu(g);
    f.nu.push_back(fit_gamma_mle(col));
  }
  for (int i = 0; i < spec.k; ++i) {
    if (spec.sv) {
      for (int j = 0; j < n; ++j) col(j) = draws[j].sigma2(i);
      f.sigma2.push_back(fit_invgamma_mle(col));
    }
    for (int j = 0; j < n; ++j) col(j) = std::exp(draws[j].h0(i));
    f.h0_level.push_back(fit_invgamma_mle(col));
  }
  return f;
}

ParameterDraw ProposalFamily::sample(Rng& rng) const {
  const int k = spec.k;
  const int nb = k * spec.n_coef();
  const Eigen::VectorXd v = mvn_sample(gauss_mean, gauss_chol, rng);
  ParameterDraw d;
  d.B = Eigen::Map<const Eigen::MatrixXd>(v.data(), k, spec.n_coef());
  d.a = v.segment(nb, spec.n_a());
  d.gamma = has_skew(spec.family) ? Eigen::VectorXd(v.tail(k)) : Eigen::VectorXd::Zero(k);
  d.nu.resize(spec.n_nu());
  for (int g = 0; g < spec.n_nu(); ++g) d.nu(g) = gamma_sample(nu[g].shape, nu[g].rate, rng);
  d.sigma2 = Eigen::VectorXd::Zero(k);
  d.h0.resize(k);
  for (int i = 0; i < k; ++i) {
    if (spec.sv) d.sigma2(i) = invgamma_sample(sigma2[i].shape, sigma2[i].rate, rng);
    d.h0(i) = std::log(invgamma_sample(h0_level[i].shape, h0_level[i].rate, rng));
  }
  return d;
}

double ProposalFamily::log_density(const ParameterDraw& theta) const {
  double lp = mvn_logpdf_chol(pack_gaussian_block(spec, theta), gauss_mean, gauss_chol);
  for (int g = 0; g < spec.n_nu(); ++g) lp += gamma_logpdf(theta.nu(g), nu[g].shape, nu[g].rate);
  for (int i = 0; i < spec.k; ++i) {
    if (spec.sv) lp += invgamma_logpdf(theta.sigma2(i), sigma2[i].shape, sigma2[i].rate);
    const double level = std::exp(theta.h0(i));
    lp += invgamma_logpdf(level, h0_level[i].shape, h0_level[i].rate) + theta.h0(i);
  }
  return lp;
}

double log_prior_density(const ModelSpec& spec, const PriorSpec& prior,
                         const ParameterDraw& theta) {
  const int k = spec.k;
  const int nb = k * spec.n_coef();
  const Eigen::Map<const Eigen::VectorXd> b(theta.B.data(), nb);
  double lp = 0.0;
  for (int j = 0; j < nb; ++j) lp += normal_logpdf(b(j), prior.b0(j), prior.vb0(j));
  for (int j = 0; j < spec.n_a(); ++j) lp += normal_logpdf(theta.a(j), 0.0, prior.va);
  if (has_skew(spec.family)) {
    for (int i = 0; i < k; ++i) lp += normal_logpdf(theta.gamma(i), 0.0, prior.vgamma);
  }
  if (spec.n_nu() > 0) {
    const double log_mass =
        std::log(boost::math::gamma_q(prior.nu_shape, 2.0 * prior.nu_rate));
    for (int g = 0; g < spec.n_nu(); ++g) {
      if (!(theta.nu(g) > 2.0)) return kNegInf;
      lp += gamma_logpdf(theta.nu(g), prior.nu_shape, prior.nu_rate) - log_mass;
    }
  }
  for (int i = 0; i < k; ++i) {
    if (spec.sv) {
      if (!(theta.sigma2(i) > 0.0)) return kNegInf;
      lp += gamma_logpdf(theta.sigma2(i), 0.5, 0.5 / prior.vsigma);
    }
    lp += normal_logpdf(theta.h0(i), prior.h0_mean(i), prior.h0_var);
  }
  return lp;
}

}  // namespace skewvar
