#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "skewvar/sampler.hpp"

namespace skewvar {

struct ChainConfig {
  int n_draws = 20000;  // total sweeps, burn-in included
  int n_burn = 5000;
  int thin = 1;
  std::uint64_t seed = 1;
  bool keep_latents = false;
  double c_xi = 0.75;
  SamplerOptions options;
};

/// Posterior means of the latent states over the retained draws.
struct LatentSummary {
  Eigen::MatrixXd xi_mean;    // T x n_xi_cols
  Eigen::MatrixXd logh_mean;  // T x k
  Eigen::MatrixXd h_mean;     // T x k, mean of exp(log h)
};

struct AcceptanceSummary {
  double B = 1.0, gamma = 1.0, a = 1.0, h = 1.0, sigma2 = 1.0, nu = 1.0, xi = 1.0;
  double nu_rank = 1.0;  // not stored in draw files
  Eigen::VectorXd nu_log_step;
};

struct ChainOutput {
  ModelSpec spec;
  std::vector<ParameterDraw> draws;
  Eigen::MatrixXd last_logh;          // draws x k, log h at the final period
  std::vector<LatentPaths> latents;   // filled only with keep_latents
  LatentSummary summary;
  AcceptanceSummary acceptance;
};

/// Runs n_draws sweeps, adapting the nu step sizes during burn-in only, and
/// keeps every thin-th draw afterwards: (n_draws - n_burn) / thin draws.
ChainOutput run_chain(const ModelSpec& spec, const PriorSpec& prior,
                      const Design& design, const ChainConfig& config);

}  // namespace skewvar
