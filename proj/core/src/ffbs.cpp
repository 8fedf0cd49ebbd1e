#include "skewvar/ffbs.hpp"

#include <cmath>
#include <string>

#include "skewvar/errors.hpp"

namespace skewvar {

namespace {
struct Filtered {
  Eigen::VectorXd mean;  // m_0..m_T
  Eigen::VectorXd var;   // P_0..P_T
};

Filtered forward_filter(const LocalLevelModel& model) {
  const Eigen::Index T = model.obs.size();
  Filtered f{Eigen::VectorXd(T + 1), Eigen::VectorXd(T + 1)};
  f.mean(0) = model.init_mean;
  f.var(0) = model.init_var;
  for (Eigen::Index t = 1; t <= T; ++t) {
    const double pred_var = f.var(t - 1) + model.state_var;
    const double v = model.obs_var(t - 1);
    const double s = pred_var + v;
    const double gain = pred_var / s;
    f.mean(t) = f.mean(t - 1) + gain * (model.obs(t - 1) - f.mean(t - 1));
    f.var(t) = pred_var * v / s;
    if (!std::isfinite(f.mean(t)) || !(f.var(t) > 0.0)) {
      throw NumericError("volatility filter diverged at t=" + std::to_string(t));
    }
  }
  return f;
}
}  // namespace

SmoothedMoments smooth_local_level(const LocalLevelModel& model) {
  const Filtered f = forward_filter(model);
  const Eigen::Index T = model.obs.size();
  SmoothedMoments s{f.mean, f.var};
  for (Eigen::Index t = T - 1; t >= 0; --t) {
    const double pred_var = f.var(t) + model.state_var;
    const double J = f.var(t) / pred_var;
    s.mean(t) = f.mean(t) + J * (s.mean(t + 1) - f.mean(t));
    s.var(t) = f.var(t) + J * J * (s.var(t + 1) - pred_var);
  }
  return s;
}

Eigen::VectorXd sample_local_level(const LocalLevelModel& model, Rng& rng) {
  const Filtered f = forward_filter(model);
  const Eigen::Index T = model.obs.size();
  Eigen::VectorXd x(T + 1);
  x(T) = f.mean(T) + std::sqrt(f.var(T)) * std_normal(rng);
  for (Eigen::Index t = T - 1; t >= 0; --t) {
    if (model.state_var <= 0.0) {
      x(t) = x(t + 1);
      continue;
    }
    const double pred_var = f.var(t) + model.state_var;
    const double J = f.var(t) / pred_var;
    const double mean = f.mean(t) + J * (x(t + 1) - f.mean(t));
    const double var = f.var(t) * model.state_var / pred_var;
    x(t) = mean + std::sqrt(var) * std_normal(rng);
  }
  if (!x.allFinite()) throw NumericError("volatility sampler produced a non-finite state");
  return x;
}

}  // namespace skewvar
