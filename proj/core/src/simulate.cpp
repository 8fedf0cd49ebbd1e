#include "skewvar/simulate.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "skewvar/design.hpp"
#include "skewvar/errors.hpp"
#include "skewvar/shocks.hpp"

namespace skewvar {

double companion_spectral_radius(const Eigen::MatrixXd& B, int k, int p) {
  if (p == 0) return 0.0;
  const int n = k * p;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  C.topRows(k) = B.block(0, 1, k, n);
  if (p > 1) C.bottomLeftCorner(n - k, n - k).setIdentity();
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

LatentPaths simulate_latents(const ModelSpec& spec, const ParameterDraw& params, int T,
                             Rng& rng) {
  LatentPaths out;
  const int k = spec.k;
  out.xi = Eigen::MatrixXd::Ones(T, spec.n_xi_cols());
  if (has_mixing(spec.family)) {
    for (int t = 0; t < T; ++t) {
      for (int j = 0; j < spec.n_xi_cols(); ++j) {
        const double half = 0.5 * params.nu(j);
        out.xi(t, j) = invgamma_sample(half, half, rng);
      }
    }
  }
  out.logh.resize(T, k);
  for (int i = 0; i < k; ++i) {
    double level = params.h0(i);
    const double sd = spec.sv ? std::sqrt(params.sigma2(i)) : 0.0;
    for (int t = 0; t < T; ++t) {
      level += sd * std_normal(rng);
      out.logh(t, i) = level;
    }
  }
  return out;
}

Eigen::MatrixXd simulate_observations(const ModelSpec& spec, const ParameterDraw& params,
                                      const LatentPaths& latents,
                                      const Eigen::MatrixXd& presample, Rng& rng) {
  const int k = spec.k;
  const int p = spec.p;
  const int T = static_cast<int>(latents.logh.rows());
  if (presample.rows() != p || presample.cols() != k) {
    throw ConfigError("presample must be p x k");
  }
  const Eigen::MatrixXd A = unit_lower_triangular(params.a, k);
  const Eigen::MatrixXd A_inv =
      A.triangularView<Eigen::UnitLower>().solve(Eigen::MatrixXd::Identity(k, k));
  Eigen::MatrixXd hist(p + T, k);
  hist.topRows(p) = presample;
  Eigen::VectorXd eps(k);
  for (int t = 0; t < T; ++t) {
    const Eigen::VectorXd x = lag_vector(hist.middleRows(t, p), p);
    const Eigen::VectorXd xi = expand_xi(spec, latents.xi, t);
    const Eigen::VectorXd logh = latents.logh.row(t).transpose();
    for (int i = 0; i < k; ++i) eps(i) = std_normal(rng);
    Eigen::VectorXd y = params.B * x + covariance_factor(spec, A_inv, xi, logh) * eps;
    if (has_skew(spec.family)) y += skew_mean(spec, A, params.gamma, xi);
    hist.row(p + t) = y.transpose();
  }
  return hist.bottomRows(T);
}

SimulatedData simulate_dataset(const ModelSpec& spec, const ParameterDraw& truth, int T,
                               std::uint64_t seed, bool allow_unstable) {
  spec.validate();
  truth.validate(spec);
  if (T < 1) throw ConfigError("simulate: T must be positive");
  const int k = spec.k;
  const int p = spec.p;
  const double radius = companion_spectral_radius(truth.B, k, p);
  if (radius >= 1.0 && !allow_unstable) {
    throw ConfigError("simulate: VAR is not stable (companion spectral radius " +
                      std::to_string(radius) + ")");
  }
  Eigen::VectorXd mean = truth.B.col(0);
  if (radius < 1.0 && p > 0) {
    Eigen::MatrixXd I_minus = Eigen::MatrixXd::Identity(k, k);
    for (int l = 0; l < p; ++l) I_minus -= truth.B.block(0, 1 + l * k, k, k);
    mean = I_minus.partialPivLu().solve(truth.B.col(0));
  }
  Rng rng = make_rng(seed);
  SimulatedData out;
  out.latents = simulate_latents(spec, truth, T, rng);
  const Eigen::MatrixXd presample = mean.transpose().replicate(p, 1);
  const Eigen::MatrixXd y = simulate_observations(spec, truth, out.latents, presample, rng);

  Dataset& d = out.data;
  d.values.resize(p + T, k);
  d.values.topRows(p) = presample;
  d.values.bottomRows(T) = y;
  for (int i = 0; i < k; ++i) {
    d.names.push_back("y" + std::to_string(i + 1));
    d.transforms.push_back(Transform::Level);
  }
  YearMonth date{2000, 1};
  for (int t = 0; t < p + T; ++t) d.dates.push_back(date.plus_months(t));
  return out;
}

ParameterDraw example_parameters(const ModelSpec& spec) {
  const int k = spec.k;
  const int p = spec.p;
  ParameterDraw d;
  d.B = Eigen::MatrixXd::Zero(k, spec.n_coef());
  d.B.col(0).setConstant(0.1);
  for (int l = 0; l < p; ++l) {
    const double decay = 0.5 / (l + 1.0);
    for (int i = 0; i < k; ++i) {
      d.B(i, 1 + l * k + i) = decay;
      if (i + 1 < k) d.B(i, 1 + l * k + i + 1) = 0.1 * decay;
    }
  }
  d.a = Eigen::VectorXd::Constant(spec.n_a(), -0.3);
  d.gamma = Eigen::VectorXd::Zero(k);
  if (has_skew(spec.family)) {
    for (int i = 0; i < k; ++i) d.gamma(i) = (i % 2 == 0) ? -0.5 : 0.3;
  }
  d.nu = Eigen::VectorXd::Constant(spec.n_nu(), 6.0);
  d.sigma2 = Eigen::VectorXd::Constant(k, spec.sv ? 0.04 : 0.0);
  d.h0 = Eigen::VectorXd::Constant(k, std::log(0.5));
  return d;
}

}  // namespace skewvar
