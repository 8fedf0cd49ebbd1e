#include "skewvar/chain.hpp"

#include <string>

#include "skewvar/errors.hpp"

namespace skewvar {

ChainOutput run_chain(const ModelSpec& spec, const PriorSpec& prior, const Design& design,
                      const ChainConfig& config) {
  if (config.n_draws <= config.n_burn || config.n_burn < 0 || config.thin < 1) {
    throw ConfigError("mcmc: need n_draws > n_burn >= 0 and thin >= 1");
  }
  if (!(config.c_xi > 0.0)) throw ConfigError("mcmc: c_xi must be positive");
  const Problem problem{spec, prior, design, config.options};
  ChainState state = initial_state(problem, config.seed);
  state.tuning.c_xi = config.c_xi;

  const int T = design.T();
  const int k = spec.k;
  const int n_keep = (config.n_draws - config.n_burn) / config.thin;
  ChainOutput out;
  out.spec = spec;
  out.draws.reserve(n_keep);
  out.last_logh.resize(n_keep, k);
  LatentSummary& sum = out.summary;
  sum.xi_mean = Eigen::MatrixXd::Zero(T, state.latents.xi.cols());
  sum.logh_mean = Eigen::MatrixXd::Zero(T, k);
  sum.h_mean = Eigen::MatrixXd::Zero(T, k);

  for (int s = 0; s < config.n_draws; ++s) {
    state.adapting = s < config.n_burn;
    if (s == config.n_burn) state.acceptance = AcceptanceStats{};
    try {
      gibbs_sweep(state, problem);
    } catch (const NumericError& err) {
      throw NumericError("sweep " + std::to_string(s) + ": " + err.what());
    }
    if (s < config.n_burn || (s - config.n_burn + 1) % config.thin != 0) continue;
    const int j = static_cast<int>(out.draws.size());
    if (j >= n_keep) break;
    out.draws.push_back(state.params);
    out.last_logh.row(j) =
        T > 0 ? Eigen::RowVectorXd(state.latents.logh.row(T - 1)) : state.params.h0.transpose();
    sum.xi_mean += state.latents.xi;
    sum.logh_mean += state.latents.logh;
    sum.h_mean += state.latents.logh.array().exp().matrix();
    if (config.keep_latents) out.latents.push_back(state.latents);
  }
  const double n = static_cast<double>(out.draws.size());
  sum.xi_mean /= n;
  sum.logh_mean /= n;
  sum.h_mean /= n;

  const AcceptanceStats& acc = state.acceptance;
  out.acceptance.B = acc.B.rate();
  out.acceptance.gamma = acc.gamma.rate();
  out.acceptance.a = acc.a.rate();
  out.acceptance.h = acc.h.rate();
  out.acceptance.sigma2 = acc.sigma2.rate();
  out.acceptance.nu = acc.nu.rate();
  out.acceptance.xi = acc.xi.rate();
  out.acceptance.nu_rank = acc.nu_rank.rate();
  out.acceptance.nu_log_step = state.tuning.log_step_nu;
  return out;
}

}  // namespace skewvar
