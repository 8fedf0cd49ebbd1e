#include "support/conjugacy.hpp"

#include <cctype>
#include <cmath>

#include "skewvar/densities.hpp"
#include "skewvar/simulate.hpp"
#include "support/oracles.hpp"

using namespace skewvar;

namespace oracle {

namespace {

double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::VectorXd z = L.triangularView<Eigen::Lower>().solve(x - mean);
  return -0.5 * x.size() * kLogTwoPi - L.diagonal().array().log().sum() - 0.5 * z.squaredNorm();
}

struct Window {
  Eigen::Vector2d lo, hi;
};

// Compare a bivariate analytic conditional with grid moments of logf.
double compare2(const GaussianConditional& cond,
                const std::function<double(double, double)>& logf) {
  const Eigen::Matrix2d cov = cond.precision.inverse();
  const Eigen::Vector2d sd = cov.diagonal().cwiseSqrt();
  const Eigen::Vector2d mean = cond.mean.head<2>();
  const GridMoments2 g = grid_moments2(logf, mean - 9.0 * sd, mean + 9.0 * sd, 201);
  double err = 0.0;
  for (int i = 0; i < 2; ++i) {
    err = std::max(err, std::abs(g.mean(i) - mean(i)) / std::max(std::abs(mean(i)), sd(i)));
    for (int j = 0; j < 2; ++j) {
      err = std::max(err, std::abs(g.cov(i, j) - cov(i, j)) / std::sqrt(cov(i, i) * cov(j, j)));
    }
  }
  return err;
}

}  // namespace

double direct_loglik(const ModelSpec& spec, const ParameterDraw& theta, const LatentPaths& latents,
                     const Design& design) {
  const int k = spec.k;
  const Eigen::MatrixXd A = unit_lower_triangular(theta.a, k);
  const Eigen::MatrixXd Ainv = A.inverse();
  double total = 0.0;
  for (int t = 0; t < design.T(); ++t) {
    Eigen::VectorXd w(k);
    for (int i = 0; i < k; ++i) {
      if (!has_mixing(spec.family)) {
        w(i) = 1.0;
      } else if (shared_mixing(spec.family)) {
        w(i) = latents.xi(t, 0);
      } else {
        w(i) = latents.xi(t, i);
      }
    }
    const Eigen::MatrixXd W = w.asDiagonal();
    const Eigen::MatrixXd H = latents.logh.row(t).array().exp().matrix().asDiagonal();
    const Eigen::MatrixXd Wh = w.cwiseSqrt().asDiagonal();
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    if (orthogonal_mixing(spec.family)) {
      mean = Ainv * W * theta.gamma;
      cov = Ainv * W * H * Ainv.transpose();
    } else {
      mean = W * theta.gamma;
      cov = Wh * Ainv * H * Ainv.transpose() * Wh;
    }
    const Eigen::VectorXd y = design.Y.row(t).transpose();
    const Eigen::VectorXd x = design.X.row(t).transpose();
    total += mvn_logpdf(y, theta.B * x + mean, cov);
  }
  return total;
}

Toy make_toy(Family family, int k, int p, int T, std::uint64_t seed) {
  ModelSpec spec;
  spec.family = family;
  spec.sv = true;
  spec.k = k;
  spec.p = p;
  ParameterDraw truth = example_parameters(spec);
  truth.a = Eigen::VectorXd::LinSpaced(spec.n_a(), -0.4, 0.3);
  const SimulatedData sim = simulate_dataset(spec, truth, T + p, seed);
  Toy toy;
  toy.problem.spec = spec;
  Design d = build_design(sim.data, p);
  d.Y = d.Y.bottomRows(T).eval();
  d.X = d.X.bottomRows(T).eval();
  toy.problem.design = d;
  PriorSpec& prior = toy.problem.prior;
  const int nb = k * spec.n_coef();
  prior.b0 = Eigen::VectorXd::LinSpaced(nb, -0.2, 0.2);
  prior.vb0 = Eigen::VectorXd::LinSpaced(nb, 0.05, 0.5);
  prior.h0_mean = Eigen::VectorXd::Zero(k);
  prior.va = 0.5;
  prior.vgamma = 0.7;
  toy.state = initial_state(toy.problem, seed + 1);
  Rng rng = make_rng(seed, 99);
  toy.state.params = truth;
  for (int j = 0; j < truth.a.size(); ++j) toy.state.params.a(j) += 0.1 * std_normal(rng);
  for (int t = 0; t < T; ++t) {
    for (int c = 0; c < toy.state.latents.xi.cols(); ++c) {
      toy.state.latents.xi(t, c) = has_mixing(family) ? invgamma_sample(3.0, 3.0, rng) : 1.0;
    }
    for (int i = 0; i < k; ++i) toy.state.latents.logh(t, i) = 0.6 * std_normal(rng);
  }
  return toy;
}

double coefficient_grid_error(Family family, std::uint64_t seed) {
  // k = 2, p = 0: the two intercepts form vec(B)
  Toy toy = make_toy(family, 2, 0, 25, seed);
  const GaussianConditional cond = coefficient_conditional(toy.state, toy.problem);
  const auto& prior = toy.problem.prior;
  auto logf = [&](double b1, double b2) {
    ParameterDraw th = toy.state.params;
    th.B(0, 0) = b1;
    th.B(1, 0) = b2;
    return normal_logpdf(b1, prior.b0(0), prior.vb0(0)) +
           normal_logpdf(b2, prior.b0(1), prior.vb0(1)) +
           direct_loglik(toy.problem.spec, th, toy.state.latents, toy.problem.design);
  };
  return compare2(cond, logf);
}

double skewness_grid_error(Family family, std::uint64_t seed) {
  Toy toy = make_toy(family, 2, 1, 25, seed);
  const GaussianConditional cond = skewness_conditional(toy.state, toy.problem);
  const double vg = toy.problem.prior.vgamma;
  auto logf = [&](double g1, double g2) {
    ParameterDraw th = toy.state.params;
    th.gamma << g1, g2;
    return normal_logpdf(g1, 0.0, vg) + normal_logpdf(g2, 0.0, vg) +
           direct_loglik(toy.problem.spec, th, toy.state.latents, toy.problem.design);
  };
  return compare2(cond, logf);
}

double contemporaneous_grid_error(Family family, std::uint64_t seed) {
  // k = 3: row 2 of A carries (a_31, a_32)
  Toy toy = make_toy(family, 3, 1, 25, seed);
  const GaussianConditional cond = contemporaneous_conditional(toy.state, toy.problem, 2);
  const double va = toy.problem.prior.va;
  auto logf = [&](double a1, double a2) {
    ParameterDraw th = toy.state.params;
    th.a(1) = a1;
    th.a(2) = a2;
    return normal_logpdf(a1, 0.0, va) + normal_logpdf(a2, 0.0, va) +
           direct_loglik(toy.problem.spec, th, toy.state.latents, toy.problem.design);
  };
  return compare2(cond, logf);
}

std::string test_name(skewvar::Family family) {
  std::string out;
  for (char ch : skewvar::family_name(family)) {
    if (std::isalnum(static_cast<unsigned char>(ch))) out += ch;
  }
  return out;
}

}  // namespace oracle
