#pragma once

#include <vector>

#include <Eigen/Dense>

#include "skewvar/chain.hpp"
#include "skewvar/dataset.hpp"
#include "skewvar/model.hpp"
#include "skewvar/random.hpp"

namespace skewvar {

struct ForecastConfig {
  int origin_start = 0;  // row index T0 of the last observation of the first sample
  int sample_end = 0;    // row index T1 of the last observation used for scoring
  std::vector<int> horizons{1, 3, 6, 12};
  int n_paths = 1;       // simulated paths per posterior draw

  void validate(int n_rows) const;
};

/// One simulated future path. Row h-1 holds the draw of y_{t+h} and the
/// Gaussian moments of y_{t+h} given the simulated path up to t+h-1 and the
/// simulated (W, H) at t+h.
struct PredictivePath {
  Eigen::MatrixXd y;          // H x k
  Eigen::MatrixXd cond_mean;  // H x k
  Eigen::MatrixXd cond_var;   // H x k, marginal variances
  bool explosive = false;     // some |y| > 1e10
};

/// Simulates y_{t+1..t+H} under the model's data generating process from the
/// last p observed rows (`recent`, oldest first) and log h_t.
PredictivePath simulate_predictive(const ModelSpec& spec, const ParameterDraw& theta,
                                   const Eigen::VectorXd& logh_last,
                                   const Eigen::MatrixXd& recent, int horizon,
                                   Rng& rng);

struct HorizonEnsemble {
  int horizon = 1;
  Eigen::MatrixXd draws;      // n x k
  Eigen::MatrixXd cond_mean;  // n x k
  Eigen::MatrixXd cond_var;   // n x k
  int explosive = 0;
};

struct PredictiveEnsemble {
  int origin = 0;  // row index t of the forecast origin
  std::vector<HorizonEnsemble> horizons;

  const HorizonEnsemble* find(int horizon) const;
};

/// One path per (draw, path) pair: draws.size() * n_paths members per horizon.
PredictiveEnsemble build_ensemble(const ModelSpec& spec, const ChainOutput& posterior,
                                  const Eigen::MatrixXd& recent,
                                  const std::vector<int>& horizons, int n_paths,
                                  int origin, Rng& rng);

/// Per-origin scores for one (horizon, variable) pair.
struct OriginScore {
  int origin = 0;
  int horizon = 1;
  int variable = 0;
  double mean = 0.0;
  double actual = 0.0;
  double sq_error = 0.0;
  double log_score = 0.0;
  double crps = 0.0;
  double pit = 0.0;
  bool log_score_floored = false;
};

/// Scores every horizon of `ensemble` whose target row exists in `values`.
std::vector<OriginScore> score_ensemble(const PredictiveEnsemble& ensemble,
                                        const Eigen::MatrixXd& values);

/// Recursive out-of-sample exercise: for every origin t in [T0, T1) re-estimate
/// on rows 0..t (prior rebuilt from that sample), simulate the predictive
/// ensemble and score it against rows t + h <= T1. Origins run on up to
/// `threads` threads; the result does not depend on the thread count.
std::vector<OriginScore> recursive_forecast(const ModelSpec& spec,
                                            const PriorSpec& hyper,
                                            const Dataset& data,
                                            const ForecastConfig& forecast,
                                            const ChainConfig& chain, int threads = 1);

}  // namespace skewvar
