#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "skewvar/chain.hpp"
#include "skewvar/config.hpp"
#include "skewvar/draws_io.hpp"
#include "skewvar/errors.hpp"
#include "skewvar/minnesota.hpp"
#include "skewvar/simulate.hpp"

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

PosteriorFile small_posterior(bool keep_latents) {
  const ModelSpec spec = make_spec(Family::MST, true, 2, 1);
  const SimulatedData sim = simulate_dataset(spec, example_parameters(spec), 40, 5);
  PosteriorFile f;
  f.prior = default_prior(spec, sim.data.values);
  ChainConfig cfg;
  cfg.n_draws = 60;
  cfg.n_burn = 10;
  cfg.seed = 77;
  cfg.keep_latents = keep_latents;
  f.posterior = run_chain(spec, f.prior, build_design(sim.data, 1), cfg);
  f.seed = 77;
  f.T = 40;
  return f;
}

void expect_same(const PosteriorFile& a, const PosteriorFile& b) {
  EXPECT_TRUE(a.posterior.spec == b.posterior.spec);
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.T, b.T);
  ASSERT_EQ(a.posterior.draws.size(), b.posterior.draws.size());
  for (std::size_t j = 0; j < a.posterior.draws.size(); ++j) {
    EXPECT_TRUE(a.posterior.draws[j] == b.posterior.draws[j]);
  }
  EXPECT_EQ(a.posterior.last_logh, b.posterior.last_logh);
  EXPECT_EQ(a.prior.b0, b.prior.b0);
  EXPECT_EQ(a.prior.vb0, b.prior.vb0);
  EXPECT_EQ(a.prior.h0_mean, b.prior.h0_mean);
  EXPECT_EQ(a.prior.vsigma, b.prior.vsigma);
  EXPECT_EQ(a.posterior.acceptance.xi, b.posterior.acceptance.xi);
  EXPECT_EQ(a.posterior.summary.logh_mean, b.posterior.summary.logh_mean);
  ASSERT_EQ(a.posterior.latents.size(), b.posterior.latents.size());
  for (std::size_t j = 0; j < a.posterior.latents.size(); ++j) {
    EXPECT_TRUE(a.posterior.latents[j] == b.posterior.latents[j]);
  }
}

}  // namespace

TEST(Draws, BinaryRoundTrip) {
  for (bool keep : {false, true}) {
    const PosteriorFile f = small_posterior(keep);
    std::stringstream buf;
    save_draws(buf, f);
    const PosteriorFile back = load_draws(buf, f.posterior.spec);
    expect_same(f, back);
  }
}

TEST(Draws, FileRoundTripAndWrongModel) {
  const PosteriorFile f = small_posterior(false);
  const auto path = std::filesystem::temp_directory_path() / "skewvar_io_test.bin";
  save_draws(path.string(), f);
  expect_same(f, load_draws(path.string()));
  ModelSpec other = f.posterior.spec;
  other.family = Family::OST;
  EXPECT_THROW(load_draws(path.string(), other), ConfigError);
  std::filesystem::remove(path);
}

TEST(Draws, CorruptInputRejected) {
  const PosteriorFile f = small_posterior(false);
  std::stringstream buf;
  save_draws(buf, f);
  const std::string bytes = buf.str();
  std::stringstream truncated(bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(load_draws(truncated), DataError);
  std::string bad = bytes;
  bad[0] = 'X';
  std::stringstream magic(bad);
  EXPECT_THROW(load_draws(magic), DataError);
  EXPECT_THROW(load_draws("/nonexistent/draws.bin"), DataError);
}

TEST(Draws, LargeModelRoundTrip) {
  const ModelSpec spec = make_spec(Family::MST, true, 4, 4);
  PosteriorFile f;
  f.posterior.spec = spec;
  f.prior.b0 = Eigen::VectorXd::Zero(4 * spec.n_coef());
  f.prior.vb0 = Eigen::VectorXd::Ones(4 * spec.n_coef());
  f.prior.h0_mean = Eigen::VectorXd::Zero(4);
  f.T = 500;
  Rng rng = make_rng(3);
  const ParameterDraw base = example_parameters(spec);
  for (int j = 0; j < 15000; ++j) {
    ParameterDraw d = base;
    d.B(0, 0) = std_normal(rng);
    d.nu(3) = 2.0 + uniform01(rng);
    f.posterior.draws.push_back(d);
  }
  f.posterior.last_logh = Eigen::MatrixXd::Random(15000, 4);
  f.posterior.acceptance.nu_log_step = Eigen::VectorXd::Zero(4);
  std::stringstream buf;
  save_draws(buf, f);
  const PosteriorFile back = load_draws(buf);
  ASSERT_EQ(back.posterior.draws.size(), 15000u);
  EXPECT_TRUE(back.posterior.draws[14321] == f.posterior.draws[14321]);
  EXPECT_EQ(back.posterior.last_logh, f.posterior.last_logh);
}

TEST(Draws, CsvExportHeader) {
  const PosteriorFile f = small_posterior(false);
  std::stringstream out;
  export_draws_csv(f, out);
  std::string header;
  std::getline(out, header);
  EXPECT_EQ(header.rfind("B_1_0,B_2_0,", 0), 0u);
  EXPECT_NE(header.find("a_1"), std::string::npos);
  EXPECT_NE(header.find("gamma_2"), std::string::npos);
  EXPECT_NE(header.find("nu_2"), std::string::npos);
  EXPECT_NE(header.find("sigma2_1"), std::string::npos);
  int rows = 0;
  for (std::string line; std::getline(out, line);) ++rows;
  EXPECT_EQ(rows, 50);
}

TEST(Config, ParsesAllSections) {
  std::istringstream in(R"(
[data]
path = data.csv
variables = gdp, cpi
transforms = logdiff, level
start = 1990-01
end = 2019-12

[model]
family = OST
sv = true
p = 4

[prior]
l1 = 0.1
vsigma = 0.5

[mcmc]
draws = 3000
burn = 1000
thin = 2
seed = 42

[forecast]
origin_start = 2010-01
sample_end = 2019-12
horizons = 1, 6

[ml]
route = A2
n_init = 500
max_variance = 0.5
)");
  const RunConfig c = parse_config(in);
  EXPECT_EQ(c.data_path, "data.csv");
  ASSERT_EQ(c.variables.size(), 2u);
  EXPECT_EQ(c.variables[1], "cpi");
  EXPECT_EQ(c.transforms[0], Transform::LogDiff);
  EXPECT_EQ(c.model.family, Family::OST);
  EXPECT_TRUE(c.model.sv);
  EXPECT_EQ(c.model.p, 4);
  EXPECT_DOUBLE_EQ(c.hyper.l1, 0.1);
  EXPECT_DOUBLE_EQ(c.hyper.vsigma, 0.5);
  EXPECT_EQ(c.chain.n_draws, 3000);
  EXPECT_EQ(c.chain.thin, 2);
  EXPECT_EQ(c.chain.seed, 42u);
  EXPECT_TRUE(c.seed_set);
  EXPECT_EQ(c.horizons, (std::vector<int>{1, 6}));
  EXPECT_EQ(c.origin_start->str(), "2010-01");
  EXPECT_EQ(c.ml.route, IntegrationRoute::A2);
  EXPECT_EQ(c.ml.n_init, 500);
  EXPECT_NO_THROW(c.require_seed());
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  std::istringstream unknown("[model]\nfamly = MST\n");
  EXPECT_THROW(parse_config(unknown), ConfigError);
  std::istringstream section("[modle]\nfamily = MST\n");
  EXPECT_THROW(parse_config(section), ConfigError);
  std::istringstream family("[model]\nfamily = Cauchy\n");
  EXPECT_THROW(parse_config(family), ConfigError);
  std::istringstream number("[mcmc]\ndraws = lots\n");
  EXPECT_THROW(parse_config(number), ConfigError);
  std::istringstream noseed("[model]\nfamily = MST\n");
  EXPECT_THROW(parse_config(noseed).require_seed(), ConfigError);
}

TEST(Config, NumberListsAndWindows) {
  EXPECT_EQ(parse_number_list(" 1, 2.5,-3 "), (std::vector<double>{1.0, 2.5, -3.0}));
  EXPECT_THROW(parse_number_list("1,,2"), ConfigError);
  Dataset d;
  d.names = {"x"};
  for (int i = 0; i < 12; ++i) d.dates.push_back(YearMonth{2001, 1}.plus_months(i));
  d.values = Eigen::VectorXd::LinSpaced(12, 0, 11);
  d.transforms = {Transform::Level};
  const Dataset w = select_window(d, YearMonth{2001, 3}, YearMonth{2001, 6});
  EXPECT_EQ(w.T(), 4);
  EXPECT_DOUBLE_EQ(w.values(0, 0), 2.0);
}
