#include "skewvar/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>

#include "skewvar/densities.hpp"
#include "skewvar/errors.hpp"

namespace skewvar {

double log_score_rao_blackwell(const Eigen::VectorXd& means, const Eigen::VectorXd& vars,
                               double actual, bool* floored) {
  const Eigen::Index n = means.size();
  if (n == 0 || vars.size() != n) throw ConfigError("log score: mismatched components");
  double mx = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd lw(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    lw(r) = normal_logpdf(actual, means(r), vars(r));
    if (lw(r) > mx) mx = lw(r);
  }
  double value = -std::numeric_limits<double>::infinity();
  if (std::isfinite(mx)) {
    value = mx + std::log((lw.array() - mx).exp().sum()) - std::log(static_cast<double>(n));
  }
  const bool hit = !std::isfinite(value) || value < kLogScoreFloor;
  if (floored) *floored = hit;
  return hit ? kLogScoreFloor : value;
}

double crps_sample(const Eigen::VectorXd& draws, double actual) {
  const Eigen::Index n = draws.size();
  if (n < 2) throw ConfigError("crps needs at least two draws");
  std::vector<double> x(draws.data(), draws.data() + n);
  std::sort(x.begin(), x.end());
  double abs_err = 0.0;
  double spread = 0.0;  // sum over i<j of x_(j) - x_(i)
  for (Eigen::Index i = 0; i < n; ++i) {
    abs_err += std::abs(x[i] - actual);
    spread += x[i] * (2.0 * i - n + 1.0);
  }
  const double nd = static_cast<double>(n);
  return abs_err / nd - spread / (nd * (nd - 1.0));
}

double pit_value(const Eigen::VectorXd& draws, double actual) {
  if (draws.size() == 0) throw ConfigError("pit needs draws");
  return static_cast<double>((draws.array() <= actual).count()) / draws.size();
}

MetricGrid average_scores(const std::vector<OriginScore>& scores, ScoreKind kind) {
  std::map<int, Eigen::VectorXd> sums;
  std::map<int, Eigen::VectorXd> counts;
  int k = 0;
  for (const auto& s : scores) k = std::max(k, s.variable + 1);
  for (const auto& s : scores) {
    auto& sum = sums[s.horizon];
    auto& cnt = counts[s.horizon];
    if (sum.size() == 0) {
      sum = Eigen::VectorXd::Zero(k);
      cnt = Eigen::VectorXd::Zero(k);
    }
    const double v = kind == ScoreKind::SquaredError ? s.sq_error
                     : kind == ScoreKind::LogScore  ? s.log_score
                                                    : s.crps;
    sum(s.variable) += v;
    cnt(s.variable) += 1.0;
  }
  MetricGrid out;
  for (auto& [h, sum] : sums) out[h] = sum.cwiseQuotient(counts[h]);
  return out;
}

namespace {

std::vector<OriginScore> score_all(const std::vector<PredictiveEnsemble>& ensembles,
                                   const Eigen::MatrixXd& values) {
  std::vector<OriginScore> all;
  std::map<int, int> skipped;
  for (const auto& ens : ensembles) {
    for (const auto& he : ens.horizons) {
      if (ens.origin + he.horizon >= values.rows()) ++skipped[he.horizon];
    }
    auto s = score_ensemble(ens, values);
    all.insert(all.end(), s.begin(), s.end());
  }
  for (const auto& [h, n] : skipped) {
    warn("h=" + std::to_string(h) + ": " + std::to_string(n) + " origins beyond the sample skipped");
  }
  return all;
}

}  // namespace

MetricGrid msfe(const std::vector<PredictiveEnsemble>& ensembles, const Eigen::MatrixXd& values) {
  return average_scores(score_all(ensembles, values), ScoreKind::SquaredError);
}

MetricGrid lp_rao_blackwell(const std::vector<PredictiveEnsemble>& ensembles,
                            const Eigen::MatrixXd& values) {
  return average_scores(score_all(ensembles, values), ScoreKind::LogScore);
}

MetricGrid crps_mc(const std::vector<PredictiveEnsemble>& ensembles,
                   const Eigen::MatrixXd& values) {
  return average_scores(score_all(ensembles, values), ScoreKind::Crps);
}

double PitHistogram::uniform_p_value() const {
  const int bins = static_cast<int>(counts.size());
  if (bins < 2 || total == 0) return 1.0;
  const double expected = static_cast<double>(total) / bins;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  boost::math::chi_squared dist(bins - 1);
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

PitHistogram pit_histogram(const std::vector<double>& pit_values, int bins) {
  if (bins < 1) throw ConfigError("pit: bins must be positive");
  PitHistogram h;
  h.counts.assign(bins, 0);
  for (double v : pit_values) {
    int b = static_cast<int>(std::floor(v * bins));
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[b];
    ++h.total;
  }
  return h;
}

std::map<int, std::vector<PitHistogram>> pit(const std::vector<PredictiveEnsemble>& ensembles,
                                             const Eigen::MatrixXd& values, int bins) {
  std::map<int, std::vector<std::vector<double>>> series;
  for (const auto& s : score_all(ensembles, values)) {
    auto& per_var = series[s.horizon];
    if (static_cast<int>(per_var.size()) <= s.variable) per_var.resize(s.variable + 1);
    per_var[s.variable].push_back(s.pit);
  }
  std::map<int, std::vector<PitHistogram>> out;
  for (const auto& [h, per_var] : series) {
    for (const auto& v : per_var) out[h].push_back(pit_histogram(v, bins));
  }
  return out;
}

Eigen::VectorXd cum_log_bf(const Eigen::VectorXd& lp_a, const Eigen::VectorXd& lp_b) {
  if (lp_a.size() != lp_b.size()) throw DataError("cumulative log BF: length mismatch");
  Eigen::VectorXd out(lp_a.size());
  double run = 0.0;
  for (Eigen::Index t = 0; t < lp_a.size(); ++t) {
    run += lp_b(t) - lp_a(t);
    out(t) = run;
  }
  return out;
}

double newey_west_variance(const Eigen::VectorXd& d, int lag) {
  const Eigen::Index n = d.size();
  if (n == 0) throw DataError("Newey-West: empty series");
  if (lag < 0) throw ConfigError("Newey-West: negative lag");
  const Eigen::VectorXd c = d.array() - d.mean();
  double lrv = c.squaredNorm() / n;
  for (int j = 1; j <= lag && j < n; ++j) {
    const double gj = c.tail(n - j).dot(c.head(n - j)) / n;
    lrv += 2.0 * (1.0 - j / (lag + 1.0)) * gj;
  }
  return lrv;
}

DmResult dm_test_nw(const Eigen::VectorXd& d, int horizon) {
  if (horizon < 1) throw ConfigError("DM test: horizon must be >= 1");
  const Eigen::Index n = d.size();
  if (n <= 2 * (horizon - 1) + 1) {
    throw DataError("DM test: series of length " + std::to_string(n) + " too short for h=" +
                    std::to_string(horizon));
  }
  DmResult r;
  r.lrv = newey_west_variance(d, horizon - 1);
  const double scale = std::max(1.0, d.squaredNorm() / n);
  if (!(r.lrv > 1e-12 * scale) || !std::isfinite(r.lrv)) return r;
  r.statistic = d.mean() / std::sqrt(r.lrv / n);
  r.p_value = 0.5 * std::erfc(r.statistic / std::sqrt(2.0));
  r.defined = true;
  return r;
}

std::string significance_stars(double p_value) {
  if (p_value < 0.01) return "***";
  if (p_value < 0.05) return "**";
  if (p_value < 0.10) return "*";
  return "";
}

}  // namespace skewvar
