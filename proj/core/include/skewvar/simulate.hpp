#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "skewvar/dataset.hpp"
#include "skewvar/model.hpp"
#include "skewvar/random.hpp"

namespace skewvar {

/// Spectral radius of the VAR companion matrix built from B (intercept
/// column ignored).
double companion_spectral_radius(const Eigen::MatrixXd& B, int k, int p);

/// Latent states drawn from their prior given static parameters:
/// xi ~ IG(nu/2, nu/2) and the log-volatility random walk from h0.
LatentPaths simulate_latents(const ModelSpec& spec, const ParameterDraw& params,
                             int T, Rng& rng);

/// y_{p+1..p+T} from the generative model given latents and the presample
/// rows (p x k, oldest first). Returns the T x k block of new rows.
Eigen::MatrixXd simulate_observations(const ModelSpec& spec,
                                      const ParameterDraw& params,
                                      const LatentPaths& latents,
                                      const Eigen::MatrixXd& presample, Rng& rng);

struct SimulatedData {
  Dataset data;         // p presample rows + T modeled rows
  LatentPaths latents;  // T rows aligned with build_design(data, p)
};

/// Simulates T modeled periods after p presample rows fixed at the
/// unconditional mean. Throws ConfigError for a non-stable B unless
/// allow_unstable is set.
SimulatedData simulate_dataset(const ModelSpec& spec, const ParameterDraw& truth,
                               int T, std::uint64_t seed,
                               bool allow_unstable = false);

/// A stable, moderately persistent parameter set used by the CLI and demos.
ParameterDraw example_parameters(const ModelSpec& spec);

}  // namespace skewvar
