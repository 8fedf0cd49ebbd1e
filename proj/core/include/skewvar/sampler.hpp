#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "skewvar/design.hpp"
#include "skewvar/ksc.hpp"
#include "skewvar/model.hpp"
#include "skewvar/random.hpp"

namespace skewvar {

/// Metropolis tuning constants for the mixing variables and degrees of freedom.
struct MhTuning {
  double c_xi = 0.75;               // scale of the IG proposal for xi
  Eigen::VectorXd log_step_nu;      // per-equation random-walk log step c_i
  double target_accept_nu = 0.25;
  int adapt_window = 10;            // sweeps between Robbins-Monro updates

  Eigen::VectorXd window_accept;    // summed acceptance probabilities
  int window_count = 0;
  int n_adaptations = 0;

  // same scheme for the rank-preserving nu move
  Eigen::VectorXd log_step_nu_rank;
  Eigen::VectorXd window_accept_rank;
  int window_count_rank = 0;
  int n_adaptations_rank = 0;
};

struct StepAcceptance {
  double accepted = 0.0;
  long attempts = 0;

  void record(double accept_probability_or_flag) {
    accepted += accept_probability_or_flag;
    ++attempts;
  }
  double rate() const { return attempts > 0 ? accepted / attempts : 1.0; }
};

struct AcceptanceStats {
  StepAcceptance B, gamma, a, h, sigma2, nu, nu_rank, xi;
};

struct SamplerOptions {
  double log_square_offset = kLogSquareOffset;
  double sigma2_rate_floor = 1e-12;
  bool joint_b_gamma = true;  // one Gaussian block for (vec B, gamma) in skewed families
  bool rank_nu_move = true;   // extra nu update with xi moved along its prior quantiles
};

/// Everything that stays fixed while the chain runs.
struct Problem {
  ModelSpec spec;
  PriorSpec prior;
  Design design;
  SamplerOptions options;
};

struct ChainState {
  ParameterDraw params;
  LatentPaths latents;
  Eigen::MatrixXi mix_indicators;  // T x k components of the KSC mixture
  MhTuning tuning;
  AcceptanceStats acceptance;
  Rng rng;
  long sweep = 0;
  bool adapting = false;
};

/// B starts at OLS when the design allows it (b0 otherwise); a = 0, gamma = 0,
/// nu at the prior mean (at least 10), h0 at its prior mean, unit mixing variables.
ChainState initial_state(const Problem& problem, std::uint64_t seed);

/// Full conditional N(mean, precision^{-1}) of a conjugate block.
struct GaussianConditional {
  Eigen::VectorXd mean;
  Eigen::MatrixXd precision;
};

GaussianConditional coefficient_conditional(const ChainState& state,
                                            const Problem& problem);
GaussianConditional skewness_conditional(const ChainState& state,
                                         const Problem& problem);
/// Joint conditional of (vec B, gamma) given A, the mixing variables and h.
GaussianConditional coefficient_skewness_conditional(const ChainState& state,
                                                     const Problem& problem);
/// Conditional of row `row` (1-based equation index >= 1, 0-based here:
/// row in [1, k)) of the strict lower triangle of A.
GaussianConditional contemporaneous_conditional(const ChainState& state,
                                                const Problem& problem, int row);

// The seven blocks of one sweep. Each leaves the state invariants intact;
// blocks that do not apply to the family are no-ops.
void draw_B(ChainState& state, const Problem& problem);
void draw_gamma(ChainState& state, const Problem& problem);
void draw_B_gamma(ChainState& state, const Problem& problem);
void draw_A(ChainState& state, const Problem& problem);
void draw_h(ChainState& state, const Problem& problem);
void draw_sigma2(ChainState& state, const Problem& problem);
void draw_nu(ChainState& state, const Problem& problem);
/// Random-walk move on nu_g that keeps the prior ranks F_nu(xi_tg) fixed, so
/// the mixing variables follow nu to their new quantiles. Only the likelihood
/// and the nu prior enter the ratio.
void draw_nu_rank(ChainState& state, const Problem& problem);
void draw_xi(ChainState& state, const Problem& problem);

void gibbs_sweep(ChainState& state, const Problem& problem);

/// Unnormalized log conditional of nu for one mixing group given its xi column.
double nu_log_conditional(double nu, const Eigen::VectorXd& xi_column,
                          const PriorSpec& prior);

}  // namespace skewvar
