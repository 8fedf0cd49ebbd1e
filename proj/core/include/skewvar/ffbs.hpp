#pragma once

#include <Eigen/Dense>

#include "skewvar/random.hpp"

namespace skewvar {

/// Scalar local-level model
///   x_t = x_{t-1} + w_t,  w_t ~ N(0, state_var),   t = 1..T
///   obs_t = x_t + v_t,    v_t ~ N(0, obs_var_t),
/// with x_0 ~ N(init_mean, init_var). state_var may be zero.
struct LocalLevelModel {
  Eigen::VectorXd obs;      // T
  Eigen::VectorXd obs_var;  // T
  double state_var = 0.0;
  double init_mean = 0.0;
  double init_var = 1.0;
};

/// Marginal smoothing moments of x_0..x_T (length T + 1).
struct SmoothedMoments {
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
};

SmoothedMoments smooth_local_level(const LocalLevelModel& model);

/// Joint draw of x_0..x_T from the smoothing distribution (forward filter,
/// backward sampler). Throws NumericError if the filter produces a
/// non-finite state.
Eigen::VectorXd sample_local_level(const LocalLevelModel& model, Rng& rng);

}  // namespace skewvar
