#include "skewvar/predictive.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "skewvar/design.hpp"
#include "skewvar/errors.hpp"
#include "skewvar/minnesota.hpp"
#include "skewvar/scoring.hpp"
#include "skewvar/shocks.hpp"

namespace skewvar {

void ForecastConfig::validate(int n_rows) const {
  if (origin_start < 0 || origin_start >= sample_end) {
    throw ConfigError("forecast: need 0 <= origin_start < sample_end");
  }
  if (sample_end >= n_rows) throw ConfigError("forecast: sample_end beyond the data");
  if (horizons.empty()) throw ConfigError("forecast: no horizons");
  for (int h : horizons) {
    if (h < 1) throw ConfigError("forecast: horizons must be >= 1");
  }
  if (n_paths < 1) throw ConfigError("forecast: n_paths must be >= 1");
}

PredictivePath simulate_predictive(const ModelSpec& spec, const ParameterDraw& theta,
                                   const Eigen::VectorXd& logh_last, const Eigen::MatrixXd& recent,
                                   int horizon, Rng& rng) {
  const int k = spec.k;
  const int p = spec.p;
  if (recent.rows() < p || recent.cols() != k) throw DataError("predictive: not enough history");
  const Eigen::MatrixXd A = unit_lower_triangular(theta.a, k);
  const Eigen::MatrixXd A_inv =
      A.triangularView<Eigen::UnitLower>().solve(Eigen::MatrixXd::Identity(k, k));
  PredictivePath out;
  out.y.resize(horizon, k);
  out.cond_mean.resize(horizon, k);
  out.cond_var.resize(horizon, k);
  Eigen::MatrixXd hist(p + horizon, k);
  hist.topRows(p) = recent.bottomRows(p);
  Eigen::VectorXd lh = logh_last;
  Eigen::VectorXd xi = Eigen::VectorXd::Ones(k);
  Eigen::VectorXd eps(k);
  for (int h = 0; h < horizon; ++h) {
    if (spec.sv) {
      for (int i = 0; i < k; ++i) lh(i) += std::sqrt(theta.sigma2(i)) * std_normal(rng);
    }
    if (has_mixing(spec.family)) {
      if (shared_mixing(spec.family)) {
        xi.setConstant(invgamma_sample(0.5 * theta.nu(0), 0.5 * theta.nu(0), rng));
      } else {
        for (int i = 0; i < k; ++i) xi(i) = invgamma_sample(0.5 * theta.nu(i), 0.5 * theta.nu(i), rng);
      }
    }
    const Eigen::VectorXd x = lag_vector(hist.middleRows(h, p), p);
    Eigen::VectorXd mean = theta.B * x;
    if (has_skew(spec.family)) mean += skew_mean(spec, A, theta.gamma, xi);
    const Eigen::MatrixXd F = covariance_factor(spec, A_inv, xi, lh);
    for (int i = 0; i < k; ++i) eps(i) = std_normal(rng);
    const Eigen::VectorXd y = mean + F * eps;
    out.cond_mean.row(h) = mean.transpose();
    out.cond_var.row(h) = F.rowwise().squaredNorm().transpose();
    out.y.row(h) = y.transpose();
    hist.row(p + h) = y.transpose();
    if (!y.allFinite() || y.cwiseAbs().maxCoeff() > 1e10) out.explosive = true;
  }
  return out;
}

const HorizonEnsemble* PredictiveEnsemble::find(int horizon) const {
  for (const auto& h : horizons) {
    if (h.horizon == horizon) return &h;
  }
  return nullptr;
}

PredictiveEnsemble build_ensemble(const ModelSpec& spec, const ChainOutput& posterior,
                                  const Eigen::MatrixXd& recent, const std::vector<int>& horizons,
                                  int n_paths, int origin, Rng& rng) {
  if (posterior.draws.empty()) throw ConfigError("predictive: no posterior draws");
  const int k = spec.k;
  const int n = static_cast<int>(posterior.draws.size()) * n_paths;
  const int max_h = *std::max_element(horizons.begin(), horizons.end());
  PredictiveEnsemble ens;
  ens.origin = origin;
  for (int h : horizons) {
    HorizonEnsemble he;
    he.horizon = h;
    he.draws.resize(n, k);
    he.cond_mean.resize(n, k);
    he.cond_var.resize(n, k);
    ens.horizons.push_back(std::move(he));
  }
  int row = 0;
  for (std::size_t r = 0; r < posterior.draws.size(); ++r) {
    const Eigen::VectorXd logh_last = posterior.last_logh.row(r).transpose();
    for (int path = 0; path < n_paths; ++path, ++row) {
      const PredictivePath pp =
          simulate_predictive(spec, posterior.draws[r], logh_last, recent, max_h, rng);
      for (auto& he : ens.horizons) {
        he.draws.row(row) = pp.y.row(he.horizon - 1);
        he.cond_mean.row(row) = pp.cond_mean.row(he.horizon - 1);
        he.cond_var.row(row) = pp.cond_var.row(he.horizon - 1);
        if (pp.explosive) ++he.explosive;
      }
    }
  }
  for (const auto& he : ens.horizons) {
    if (he.explosive > 0) {
      warn("origin " + std::to_string(origin) + ", h=" + std::to_string(he.horizon) + ": " +
           std::to_string(he.explosive) + " explosive paths");
    }
  }
  return ens;
}

std::vector<OriginScore> score_ensemble(const PredictiveEnsemble& ensemble,
                                        const Eigen::MatrixXd& values) {
  std::vector<OriginScore> out;
  for (const auto& he : ensemble.horizons) {
    const int target = ensemble.origin + he.horizon;
    if (target >= values.rows()) continue;
    for (int i = 0; i < he.draws.cols(); ++i) {
      OriginScore s;
      s.origin = ensemble.origin;
      s.horizon = he.horizon;
      s.variable = i;
      s.actual = values(target, i);
      s.mean = he.draws.col(i).mean();
      s.sq_error = (s.mean - s.actual) * (s.mean - s.actual);
      s.log_score = log_score_rao_blackwell(he.cond_mean.col(i), he.cond_var.col(i), s.actual,
                                            &s.log_score_floored);
      s.crps = crps_sample(he.draws.col(i), s.actual);
      s.pit = pit_value(he.draws.col(i), s.actual);
      out.push_back(s);
    }
  }
  return out;
}

std::vector<OriginScore> recursive_forecast(const ModelSpec& spec, const PriorSpec& hyper,
                                            const Dataset& data, const ForecastConfig& forecast,
                                            const ChainConfig& chain, int threads) {
  forecast.validate(data.T());
  const Eigen::MatrixXd scored = data.values.topRows(forecast.sample_end + 1);
  const int n_origins = forecast.sample_end - forecast.origin_start;
  std::vector<std::vector<OriginScore>> per_origin(n_origins);
  std::vector<std::exception_ptr> errors(n_origins);

  auto run_origin = [&](int t) {
    const Dataset sample = data.head(t + 1);
    sample.require_sample_size(spec.p);
    const PriorSpec prior = default_prior(spec, sample.values, hyper);
    const Design design = build_design(sample, spec.p);
    ChainConfig cfg = chain;
    cfg.seed = derive_seed(chain.seed, 2 * static_cast<std::uint64_t>(t));
    const ChainOutput post = run_chain(spec, prior, design, cfg);
    Rng rng = make_rng(derive_seed(chain.seed, 2 * static_cast<std::uint64_t>(t) + 1));
    const PredictiveEnsemble ens = build_ensemble(spec, post, sample.values.bottomRows(spec.p),
                                                  forecast.horizons, forecast.n_paths, t, rng);
    return score_ensemble(ens, scored);
  };

  // origins are independent and seeded by index, so the split does not matter
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n_origins; i = next++) {
      try {
        per_origin[i] = run_origin(forecast.origin_start + i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_threads = std::clamp(threads, 1, std::max(1, n_origins));
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<OriginScore> out;
  for (auto& scores : per_origin) out.insert(out.end(), scores.begin(), scores.end());
  return out;
}

}  // namespace skewvar
