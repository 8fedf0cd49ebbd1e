#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include <boost/math/distributions/inverse_gamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "skewvar/chain.hpp"
#include "skewvar/densities.hpp"
#include "skewvar/errors.hpp"
#include "skewvar/minnesota.hpp"
#include "skewvar/sampler.hpp"
#include "skewvar/simulate.hpp"
#include "support/conjugacy.hpp"
#include "support/oracles.hpp"

using namespace skewvar;

namespace {

ModelSpec make_spec(Family f, bool sv, int k, int p) {
  ModelSpec s;
  s.family = f;
  s.sv = sv;
  s.k = k;
  s.p = p;
  return s;
}

PriorSpec flat_prior(const ModelSpec& spec, double vb = 1e8) {
  PriorSpec prior;
  prior.b0 = Eigen::VectorXd::Zero(spec.k * spec.n_coef());
  prior.vb0 = Eigen::VectorXd::Constant(spec.k * spec.n_coef(), vb);
  prior.h0_mean = Eigen::VectorXd::Zero(spec.k);
  return prior;
}

Problem empty_problem(const ModelSpec& spec) {
  Problem pr;
  pr.spec = spec;
  pr.prior = flat_prior(spec, 2.0);
  pr.prior.b0.setConstant(0.3);
  pr.design.Y.resize(0, spec.k);
  pr.design.X.resize(0, spec.n_coef());
  return pr;
}

ChainConfig short_chain(int draws, int burn, std::uint64_t seed) {
  ChainConfig c;
  c.n_draws = draws;
  c.n_burn = burn;
  c.seed = seed;
  return c;
}

double posterior_mean(const std::vector<ParameterDraw>& d,
                      const std::function<double(const ParameterDraw&)>& f, double* sd = nullptr) {
  double s = 0, s2 = 0;
  for (const auto& x : d) {
    s += f(x);
    s2 += f(x) * f(x);
  }
  const double m = s / d.size();
  if (sd) *sd = std::sqrt(std::max(0.0, s2 / d.size() - m * m));
  return m;
}

}  // namespace

class ConjugacyGrid : public ::testing::TestWithParam<Family> {};

TEST_P(ConjugacyGrid, CoefficientsMatchQuadrature) {
  EXPECT_LT(oracle::coefficient_grid_error(GetParam(), 31), 1e-3);
}

TEST_P(ConjugacyGrid, SkewnessMatchesQuadrature) {
  if (!has_skew(GetParam())) GTEST_SKIP();
  EXPECT_LT(oracle::skewness_grid_error(GetParam(), 32), 1e-3);
}

TEST_P(ConjugacyGrid, ContemporaneousMatchesQuadrature) {
  EXPECT_LT(oracle::contemporaneous_grid_error(GetParam(), 33), 1e-3);
}

INSTANTIATE_TEST_SUITE_P(Families, ConjugacyGrid, ::testing::ValuesIn(kAllFamilies),
                         [](const auto& info) { return oracle::test_name(info.param); });

// the joint (vec B, gamma) block must reproduce both single-block conditionals
class JointBlock : public ::testing::TestWithParam<Family> {};

TEST_P(JointBlock, ConditionalsMatchSingleBlocks) {
  oracle::Toy toy = oracle::make_toy(GetParam(), 3, 1, 40, 21);
  const int k = 3, nb = k * toy.problem.spec.n_coef();
  const GaussianConditional joint = coefficient_skewness_conditional(toy.state, toy.problem);
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(toy.state.params.B.data(), nb);
  const Eigen::VectorXd g = toy.state.params.gamma;
  const Eigen::MatrixXd& P = joint.precision;

  const GaussianConditional cb = coefficient_conditional(toy.state, toy.problem);
  const Eigen::MatrixXd Pbb = P.topLeftCorner(nb, nb);
  const Eigen::VectorXd mb =
      joint.mean.head(nb) - Pbb.llt().solve(P.topRightCorner(nb, k) * (g - joint.mean.tail(k)));
  EXPECT_LT((Pbb - cb.precision).cwiseAbs().maxCoeff(), 1e-8 * cb.precision.cwiseAbs().maxCoeff());
  EXPECT_LT((mb - cb.mean).cwiseAbs().maxCoeff(), 1e-8);

  const GaussianConditional cg = skewness_conditional(toy.state, toy.problem);
  const Eigen::MatrixXd Pgg = P.bottomRightCorner(k, k);
  const Eigen::VectorXd mg =
      joint.mean.tail(k) - Pgg.llt().solve(P.bottomLeftCorner(k, nb) * (b - joint.mean.head(nb)));
  EXPECT_LT((Pgg - cg.precision).cwiseAbs().maxCoeff(), 1e-8 * cg.precision.cwiseAbs().maxCoeff());
  EXPECT_LT((mg - cg.mean).cwiseAbs().maxCoeff(), 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Families, JointBlock,
                         ::testing::Values(Family::SkewT, Family::OST, Family::MST),
                         [](const auto& info) { return oracle::test_name(info.param); });

TEST(DrawB, NoDataGivesPrior) {
  const Problem pr = empty_problem(make_spec(Family::MST, true, 2, 1));
  const ChainState st = initial_state(pr, 1);
  const GaussianConditional c = coefficient_conditional(st, pr);
  EXPECT_LT((c.mean - pr.prior.b0).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((c.precision.diagonal() - pr.prior.vb0.cwiseInverse()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DrawB, FlatPriorNormalMean) {
  const ModelSpec spec = make_spec(Family::Gaussian, false, 1, 0);
  Problem pr;
  pr.spec = spec;
  pr.prior = flat_prior(spec);
  Rng rng = make_rng(5);
  Eigen::MatrixXd y(50, 1);
  for (int t = 0; t < 50; ++t) y(t, 0) = 1.5 + std_normal(rng);
  pr.design = build_design(y, 0);
  ChainState st = initial_state(pr, 1);
  st.params.h0.setZero();
  st.latents.logh.setZero();
  const GaussianConditional c = coefficient_conditional(st, pr);
  EXPECT_NEAR(c.mean(0), y.mean(), 1e-6);
  EXPECT_NEAR(1.0 / c.precision(0, 0), 1.0 / 50.0, 1e-8);
}

TEST(DrawGamma, ConjugateNormalMean) {
  const ModelSpec spec = make_spec(Family::MST, false, 1, 0);
  Problem pr;
  pr.spec = spec;
  pr.prior = flat_prior(spec);
  Rng rng = make_rng(6);
  Eigen::MatrixXd y(40, 1);
  for (int t = 0; t < 40; ++t) y(t, 0) = 0.4 + std_normal(rng);
  pr.design = build_design(y, 0);
  ChainState st = initial_state(pr, 1);
  st.params.B.setConstant(0.1);
  st.params.h0.setZero();
  st.latents.logh.setZero();
  st.latents.xi.setOnes();
  const GaussianConditional c = skewness_conditional(st, pr);
  EXPECT_NEAR(c.precision(0, 0), 41.0, 1e-10);
  EXPECT_NEAR(c.mean(0), (y.array() - 0.1).sum() / 41.0, 1e-10);
}

TEST(DrawGamma, VanishingMixingLimit) {
  // as xi -> 0 the quadratic term vanishes but the linear term sum_t S_t^{-1} u_t survives
  oracle::Toy toy = oracle::make_toy(Family::MST, 2, 1, 20, 3);
  toy.state.latents.xi.setConstant(1e-12);
  const Design& d = toy.problem.design;
  const Eigen::MatrixXd A = unit_lower_triangular(toy.state.params.a, 2);
  Eigen::VectorXd lin = Eigen::VectorXd::Zero(2);
  for (int t = 0; t < d.T(); ++t) {
    const Eigen::VectorXd u = d.Y.row(t).transpose() - toy.state.params.B * d.X.row(t).transpose();
    const Eigen::VectorXd hinv = (-toy.state.latents.logh.row(t)).array().exp().transpose();
    lin += A.transpose() * hinv.asDiagonal() * A * u;
  }
  const GaussianConditional c = skewness_conditional(toy.state, toy.problem);
  const double vg = toy.problem.prior.vgamma;
  EXPECT_LT((c.mean - vg * lin).cwiseAbs().maxCoeff(), 1e-6 * std::max(1.0, lin.norm()));
  EXPECT_NEAR(c.precision(0, 0), 1.0 / vg, 1e-6);
  EXPECT_NEAR(c.precision(0, 1), 0.0, 1e-6);
}

TEST(DrawGamma, SymmetricDataCentersAtZero) {
  const ModelSpec spec = make_spec(Family::MST, false, 1, 1);
  ParameterDraw truth = example_parameters(spec);
  truth.gamma.setZero();
  const SimulatedData sim = simulate_dataset(spec, truth, 2000, 17);
  const Design d = build_design(sim.data, 1);
  const ChainOutput out = run_chain(spec, default_prior(spec, sim.data.values), d,
                                    short_chain(1500, 500, 3));
  double sd = 0;
  const double m = posterior_mean(out.draws, [](const ParameterDraw& x) { return x.gamma(0); }, &sd);
  EXPECT_LT(std::abs(m), 3.0 * sd);
}

TEST(DrawA, RecoversContemporaneousCoefficient) {
  const ModelSpec spec = make_spec(Family::Gaussian, false, 2, 1);
  ParameterDraw truth = example_parameters(spec);
  truth.a << 0.5;
  const SimulatedData sim = simulate_dataset(spec, truth, 5000, 23);
  const Design d = build_design(sim.data, 1);
  const ChainOutput out =
      run_chain(spec, default_prior(spec, sim.data.values), d, short_chain(600, 200, 4));
  double sd = 0;
  const double m = posterior_mean(out.draws, [](const ParameterDraw& x) { return x.a(0); }, &sd);
  EXPECT_NEAR(m, 0.5, 3.0 * sd);
}

TEST(DrawA, NoDataSamplesPrior) {
  const Problem pr = empty_problem(make_spec(Family::Gaussian, false, 3, 1));
  ChainState st = initial_state(pr, 2);
  const int n = 20000;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(3), s2 = Eigen::VectorXd::Zero(3);
  for (int i = 0; i < n; ++i) {
    draw_A(st, pr);
    s += st.params.a;
    s2 += st.params.a.cwiseProduct(st.params.a);
  }
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(s(j) / n, 0.0, 4.0 * std::sqrt(10.0 / n));
    EXPECT_NEAR(s2(j) / n, 10.0, 0.05 * 10.0);
  }
}

TEST(DrawA, OneVariableIsNoOp) {
  const Problem pr = empty_problem(make_spec(Family::MST, false, 1, 1));
  ChainState st = initial_state(pr, 2);
  draw_A(st, pr);
  EXPECT_EQ(st.params.a.size(), 0);
}

TEST(DrawH, NoSvGivesConstantPath) {
  oracle::Toy toy = oracle::make_toy(Family::OST, 2, 1, 30, 8);
  toy.problem.spec.sv = false;
  toy.state.params.sigma2.setZero();
  draw_h(toy.state, toy.problem);
  for (int i = 0; i < 2; ++i) {
    EXPECT_TRUE((toy.state.latents.logh.col(i).array() == toy.state.params.h0(i)).all());
  }
}

TEST(DrawH, NoSvMatchesGridPosterior) {
  oracle::Toy toy = oracle::make_toy(Family::Gaussian, 1, 1, 30, 9);
  toy.problem.spec.sv = false;
  toy.state.params.sigma2.setZero();
  const Design& d = toy.problem.design;
  const Eigen::VectorXd e = d.Y.col(0) - d.X * toy.state.params.B.row(0).transpose();
  const double ss = e.squaredNorm(), m = toy.problem.prior.h0_mean(0);
  const double V = toy.problem.prior.h0_var;
  const int T = d.T();
  auto logf = [&](double h) {
    return -0.5 * T * h - 0.5 * ss * std::exp(-h) - 0.5 * (h - m) * (h - m) / V;
  };
  const double centre = std::log(ss / T);
  const oracle::GridMoments g = oracle::grid_moments(logf, centre - 5.0, centre + 5.0, 20001);
  std::vector<double> draws;
  for (int r = 0; r < 40000; ++r) {
    draw_h(toy.state, toy.problem);
    draws.push_back(toy.state.params.h0(0));
  }
  double mean = 0.0, var = 0.0;
  for (double v : draws) mean += v / draws.size();
  for (double v : draws) var += (v - mean) * (v - mean) / (draws.size() - 1);
  const double se = std::sqrt(g.var / oracle::effective_size(draws));
  EXPECT_NEAR(mean, g.mean, 4.0 * se);
  EXPECT_NEAR(var / g.var, 1.0, 0.05);
  EXPECT_GT(toy.state.acceptance.h.rate(), 0.9);
}

TEST(DrawH, RecoversVolatilityPath) {
  const ModelSpec spec = make_spec(Family::Gaussian, true, 1, 1);
  ParameterDraw truth = example_parameters(spec);
  truth.sigma2 << 0.04;
  const SimulatedData sim = simulate_dataset(spec, truth, 1000, 29);
  const Design d = build_design(sim.data, 1);
  const ChainOutput out =
      run_chain(spec, default_prior(spec, sim.data.values), d, short_chain(1500, 500, 5));
  const Eigen::VectorXd a = out.summary.logh_mean.col(0);
  const Eigen::VectorXd b = sim.latents.logh.col(0);
  const double corr = ((a.array() - a.mean()) * (b.array() - b.mean())).sum() /
                      std::sqrt((a.array() - a.mean()).square().sum() *
                                (b.array() - b.mean()).square().sum());
  EXPECT_GT(corr, 0.7);
}

TEST(DrawSigma2, RecoversStateVariance) {
  const ModelSpec spec = make_spec(Family::Gaussian, true, 1, 1);
  ParameterDraw truth = example_parameters(spec);
  truth.sigma2 << 0.05;
  const SimulatedData sim = simulate_dataset(spec, truth, 2000, 32);
  const Design d = build_design(sim.data, 1);
  // the simulated volatility wanders far below the default offset's scale
  ChainConfig cfg = short_chain(4000, 1000, 6);
  cfg.options.log_square_offset = 1e-12;
  const ChainOutput out = run_chain(spec, default_prior(spec, sim.data.values), d, cfg);
  double sd = 0;
  const double m =
      posterior_mean(out.draws, [](const ParameterDraw& x) { return x.sigma2(0); }, &sd);
  EXPECT_NEAR(m, 0.05, 3.0 * sd);
}

TEST(DrawSigma2, FlatPathStaysFinite) {
  oracle::Toy toy = oracle::make_toy(Family::Gaussian, 1, 1, 10, 9);
  toy.state.latents.logh.setConstant(toy.state.params.h0(0));
  toy.state.params.sigma2 << 1e-12;
  for (int i = 0; i < 200; ++i) {
    draw_sigma2(toy.state, toy.problem);
    ASSERT_TRUE(std::isfinite(toy.state.params.sigma2(0)));
    ASSERT_GT(toy.state.params.sigma2(0), 0.0);
    ASSERT_LT(toy.state.params.sigma2(0), 1e-9);
  }
}

TEST(DrawSigma2, DiffusePriorAcceptanceIsScaleRatio) {
  oracle::Toy toy = oracle::make_toy(Family::Gaussian, 1, 1, 40, 10);
  toy.problem.prior.vsigma = 1e12;
  const double current = 0.3;
  double ss = 0.0, prev = toy.state.params.h0(0);
  for (int t = 0; t < 40; ++t) {
    ss += std::pow(toy.state.latents.logh(t, 0) - prev, 2);
    prev = toy.state.latents.logh(t, 0);
  }
  Rng rng = make_rng(77);
  const int n = 200000;
  double expected = 0.0;
  for (int i = 0; i < n; ++i) {
    expected += std::min(1.0, std::sqrt(invgamma_sample(20.0, 0.5 * ss, rng) / current));
  }
  expected /= n;
  toy.state.acceptance = AcceptanceStats{};
  for (int i = 0; i < n; ++i) {
    toy.state.params.sigma2 << current;
    draw_sigma2(toy.state, toy.problem);
  }
  EXPECT_NEAR(toy.state.acceptance.sigma2.rate(), expected, 0.005);
}

TEST(DrawNu, GridPosteriorMean) {
  const ModelSpec spec = make_spec(Family::MT, false, 1, 0);
  Problem pr = empty_problem(spec);
  Rng rng = make_rng(41);
  ChainState st = initial_state(pr, 3);
  st.latents.xi.resize(500, 1);
  for (int t = 0; t < 500; ++t) st.latents.xi(t, 0) = invgamma_sample(3.0, 3.0, rng);
  const Eigen::VectorXd xi = st.latents.xi.col(0);
  auto logpost = [&](double nu) {
    if (nu <= 2.0) return -1e300;
    boost::math::inverse_gamma_distribution<> ig(nu / 2, nu / 2);
    double lp = std::log(nu) - 0.1 * nu;
    for (int t = 0; t < xi.size(); ++t) lp += std::log(boost::math::pdf(ig, xi(t)));
    return lp;
  };
  const oracle::GridMoments g = oracle::grid_moments(logpost, 2.0, 40.0, 4001);
  double sum = 0.0;
  int kept = 0;
  for (int s = 0; s < 40000; ++s) {
    st.adapting = s < 5000;
    if (s == 5000) st.acceptance = AcceptanceStats{};
    draw_nu(st, pr);
    if (s >= 5000) {
      sum += st.params.nu(0);
      ++kept;
    }
  }
  EXPECT_NEAR(sum / kept, g.mean, 0.2);
  EXPECT_GE(st.acceptance.nu.rate(), 0.15);
  EXPECT_LE(st.acceptance.nu.rate(), 0.35);
}

TEST(DrawNu, NoDataSamplesTruncatedPrior) {
  const Problem pr = empty_problem(make_spec(Family::StudentT, false, 1, 0));
  ChainState st = initial_state(pr, 4);
  const double mass = boost::math::gamma_q(2.0, 0.2);
  const double expected = 20.0 * boost::math::gamma_q(3.0, 0.2) / mass;
  double sum = 0.0;
  int kept = 0;
  for (int s = 0; s < 300000; ++s) {
    st.adapting = s < 20000;
    draw_nu(st, pr);
    if (s >= 20000) {
      sum += st.params.nu(0);
      ++kept;
    }
  }
  EXPECT_NEAR(sum / kept, expected, 0.6);
}

class NuRank : public ::testing::TestWithParam<Family> {};

TEST_P(NuRank, AlternatingWithXiMatchesGridMarginal) {
  oracle::Toy toy = oracle::make_toy(GetParam(), 1, 0, 2, 17);
  const Problem& pr = toy.problem;
  ChainState& st = toy.state;
  if (has_skew(GetParam())) st.params.gamma << 0.9;
  st.params.nu << 6.0;
  const double g = st.params.gamma(0);
  std::vector<double> u, h;
  for (int t = 0; t < 2; ++t) {
    u.push_back(pr.design.Y(t, 0) - st.params.B(0, 0));
    h.push_back(std::exp(st.latents.logh(t, 0)));
  }
  auto logpost = [&](double nu) {
    double lp = std::log(nu) - 0.1 * nu;
    for (int t = 0; t < 2; ++t) {
      auto inner = [&](double z) {
        const double xi = std::exp(z), r = u[t] - xi * g;
        return 0.5 * nu * std::log(0.5 * nu) - std::lgamma(0.5 * nu) - 0.5 * nu * z -
               0.5 * nu / xi - 0.5 * std::log(xi * h[t]) - 0.5 * r * r / (xi * h[t]);
      };
      lp += oracle::grid_moments(inner, -12.0, 10.0, 2001).log_norm;
    }
    return lp;
  };
  const oracle::GridMoments target = oracle::grid_moments(logpost, 2.0, 200.0, 2001);

  const int burn = 5000, n = 300000, batch = 3000;
  std::vector<double> batches;
  double acc = 0.0;
  for (int s = 0; s < burn + n; ++s) {
    st.adapting = s < burn;
    draw_nu_rank(st, pr);
    draw_xi(st, pr);
    if (s < burn) continue;
    acc += st.params.nu(0);
    if ((s - burn + 1) % batch == 0) {
      batches.push_back(acc / batch);
      acc = 0.0;
    }
  }
  double mean = 0.0, var = 0.0;
  for (double b : batches) mean += b / batches.size();
  for (double b : batches) var += (b - mean) * (b - mean) / (batches.size() - 1);
  const double se = std::sqrt(var / batches.size());
  EXPECT_NEAR(mean, target.mean, 4.0 * se + 0.05) << "se " << se;
}

INSTANTIATE_TEST_SUITE_P(Families, NuRank, ::testing::Values(Family::StudentT, Family::SkewT),
                         [](const auto& info) { return oracle::test_name(info.param); });

class ExactXiProposal : public ::testing::TestWithParam<Family> {};

TEST_P(ExactXiProposal, AcceptsEverything) {
  oracle::Toy toy = oracle::make_toy(GetParam(), 1, 1, 50, 12);
  toy.state.tuning.c_xi = 1.0;
  toy.state.params.gamma.setZero();
  toy.state.acceptance = AcceptanceStats{};
  for (int i = 0; i < 20; ++i) draw_xi(toy.state, toy.problem);
  EXPECT_NEAR(toy.state.acceptance.xi.rate(), 1.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Families, ExactXiProposal,
                         ::testing::Values(Family::MT, Family::OT, Family::StudentT),
                         [](const auto& info) { return oracle::test_name(info.param); });

class XiStationary : public ::testing::TestWithParam<Family> {};

TEST_P(XiStationary, MatchesGridConditional) {
  // One period, one variable: the xi chain must target the exact conditional.
  oracle::Toy toy = oracle::make_toy(GetParam(), 1, 0, 1, 13);
  toy.state.params.gamma << 0.9;
  toy.state.params.nu << 5.0;
  const double u = toy.problem.design.Y(0, 0) - toy.state.params.B(0, 0);
  const double h = std::exp(toy.state.latents.logh(0, 0));
  const double g = toy.state.params.gamma(0), nu = 5.0;
  auto logf = [&](double z) {  // density of log xi
    const double xi = std::exp(z);
    const double r = u - xi * g;
    return -0.5 * std::log(xi) - 0.5 * r * r / (xi * h) - (nu / 2 + 1) * z - nu / (2 * xi) + z;
  };
  const double lo = -12.0, hi = 10.0;
  const int n = 20001;
  const double dz = (hi - lo) / (n - 1);
  std::vector<double> cdf(n, 0.0);
  double mx = -1e300;
  for (int i = 0; i < n; ++i) mx = std::max(mx, logf(lo + i * dz));
  for (int i = 1; i < n; ++i) {
    cdf[i] = cdf[i - 1] + 0.5 * dz * (std::exp(logf(lo + (i - 1) * dz) - mx) +
                                      std::exp(logf(lo + i * dz) - mx));
  }
  for (auto& c : cdf) c /= cdf.back();
  auto F = [&](double x) {
    const double z = std::log(x);
    if (z <= lo) return 0.0;
    if (z >= hi) return 1.0;
    const double pos = (z - lo) / dz;
    const int i = static_cast<int>(pos);
    return cdf[i] + (pos - i) * (cdf[std::min(i + 1, n - 1)] - cdf[i]);
  };
  std::vector<double> draws;
  for (int s = 0; s < 200000; ++s) {
    draw_xi(toy.state, toy.problem);
    if (s % 10 == 0) draws.push_back(toy.state.latents.xi(0, 0));
  }
  EXPECT_GT(oracle::ks_one_sample(draws, F), 0.01);
  EXPECT_GT(toy.state.acceptance.xi.rate(), 0.2);
}

INSTANTIATE_TEST_SUITE_P(Families, XiStationary,
                         ::testing::Values(Family::OST, Family::MST, Family::SkewT),
                         [](const auto& info) { return oracle::test_name(info.param); });

TEST(DrawXi, AcceptanceInRangeOnSimulatedData) {
  const ModelSpec spec = make_spec(Family::MST, true, 3, 1);
  ParameterDraw truth = example_parameters(spec);
  const SimulatedData sim = simulate_dataset(spec, truth, 300, 37);
  const ChainOutput out = run_chain(spec, default_prior(spec, sim.data.values),
                                    build_design(sim.data, 1), short_chain(600, 200, 7));
  EXPECT_GE(out.acceptance.xi, 0.2);
  EXPECT_LE(out.acceptance.xi, 0.8);
}

TEST(RunChain, SeedDeterminism) {
  const ModelSpec spec = make_spec(Family::MST, true, 2, 1);
  const SimulatedData sim = simulate_dataset(spec, example_parameters(spec), 80, 41);
  const Design d = build_design(sim.data, 1);
  const PriorSpec prior = default_prior(spec, sim.data.values);
  const ChainOutput a = run_chain(spec, prior, d, short_chain(120, 20, 9));
  const ChainOutput b = run_chain(spec, prior, d, short_chain(120, 20, 9));
  const ChainOutput c = run_chain(spec, prior, d, short_chain(120, 20, 10));
  ASSERT_EQ(a.draws.size(), 100u);
  for (std::size_t j = 0; j < a.draws.size(); ++j) EXPECT_TRUE(a.draws[j] == b.draws[j]);
  EXPECT_FALSE(a.draws.back() == c.draws.back());
}

TEST(RunChain, GaussianWithoutSvRunsConjugateStepsOnly) {
  const ModelSpec spec = make_spec(Family::Gaussian, false, 2, 1);
  const SimulatedData sim = simulate_dataset(spec, example_parameters(spec), 100, 43);
  ChainConfig cfg = short_chain(300, 100, 11);
  cfg.thin = 2;
  const ChainOutput out =
      run_chain(spec, default_prior(spec, sim.data.values), build_design(sim.data, 1), cfg);
  EXPECT_EQ(out.draws.size(), 100u);
  EXPECT_EQ(out.acceptance.B, 1.0);
  EXPECT_EQ(out.acceptance.a, 1.0);
  EXPECT_GT(out.acceptance.h, 0.9);
  for (const auto& d : out.draws) {
    EXPECT_EQ(d.nu.size(), 0);
    EXPECT_TRUE((d.gamma.array() == 0.0).all());
    EXPECT_TRUE((d.sigma2.array() == 0.0).all());
  }
}

TEST(RunChain, InvalidLengthsRejected) {
  const ModelSpec spec = make_spec(Family::Gaussian, false, 1, 1);
  const SimulatedData sim = simulate_dataset(spec, example_parameters(spec), 30, 1);
  EXPECT_THROW(run_chain(spec, default_prior(spec, sim.data.values), build_design(sim.data, 1),
                         short_chain(10, 10, 1)),
               ConfigError);
}

TEST(RunChain, StateInvariantsHold) {
  const ModelSpec spec = make_spec(Family::OST, true, 2, 1);
  const SimulatedData sim = simulate_dataset(spec, example_parameters(spec), 120, 47);
  ChainConfig cfg = short_chain(300, 100, 12);
  cfg.keep_latents = true;
  const ChainOutput out =
      run_chain(spec, default_prior(spec, sim.data.values), build_design(sim.data, 1), cfg);
  for (std::size_t j = 0; j < out.draws.size(); ++j) {
    EXPECT_TRUE((out.draws[j].nu.array() > 2.0).all());
    EXPECT_TRUE((out.draws[j].sigma2.array() > 0.0).all());
    EXPECT_TRUE((out.latents[j].xi.array() > 0.0).all());
    EXPECT_TRUE(out.latents[j].logh.allFinite());
  }
}
