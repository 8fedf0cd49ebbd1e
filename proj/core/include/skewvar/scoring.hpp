#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "skewvar/predictive.hpp"

namespace skewvar {

inline constexpr double kLogScoreFloor = -1e6;

/// log of the equally weighted mixture of N(means_r, vars_r) at `actual`.
/// Returns kLogScoreFloor (and sets *floored) when every component density
/// underflows or the result is not finite.
double log_score_rao_blackwell(const Eigen::VectorXd& means, const Eigen::VectorXd& vars,
                               double actual, bool* floored = nullptr);

/// E|Y - y| - 0.5 E|Y - Y'| estimated from the draws, the second term averaged
/// over all pairs of distinct draws. Requires at least two draws.
double crps_sample(const Eigen::VectorXd& draws, double actual);

/// Share of draws <= actual.
double pit_value(const Eigen::VectorXd& draws, double actual);

/// Per-horizon, per-variable metric averaged over origins t = T0..T1-h.
using MetricGrid = std::map<int, Eigen::VectorXd>;

MetricGrid msfe(const std::vector<PredictiveEnsemble>& ensembles,
                const Eigen::MatrixXd& values);
MetricGrid lp_rao_blackwell(const std::vector<PredictiveEnsemble>& ensembles,
                            const Eigen::MatrixXd& values);
MetricGrid crps_mc(const std::vector<PredictiveEnsemble>& ensembles,
                   const Eigen::MatrixXd& values);

enum class ScoreKind { SquaredError, LogScore, Crps };
/// Same averages computed from per-origin records (e.g. read back from disk).
MetricGrid average_scores(const std::vector<OriginScore>& scores, ScoreKind kind);

struct PitHistogram {
  std::vector<int> counts;  // equal-width bins on [0, 1]
  int total = 0;
  /// Pearson chi-square goodness-of-fit p-value against uniform bins.
  double uniform_p_value() const;
};

PitHistogram pit_histogram(const std::vector<double>& pit_values, int bins = 10);
/// horizon -> one histogram per variable.
std::map<int, std::vector<PitHistogram>> pit(const std::vector<PredictiveEnsemble>& ensembles,
                                             const Eigen::MatrixXd& values,
                                             int bins = 10);

/// Running sum of (lp_b - lp_a); positive values favour model B.
Eigen::VectorXd cum_log_bf(const Eigen::VectorXd& lp_a, const Eigen::VectorXd& lp_b);

/// Bartlett-kernel long-run variance with the given truncation lag.
double newey_west_variance(const Eigen::VectorXd& d, int lag);

struct DmResult {
  double statistic = 0.0;
  double p_value = 1.0;  // one-sided, H1: E[d] > 0
  double lrv = 0.0;
  bool defined = false;
};

/// Diebold-Mariano statistic mean(d) / sqrt(lrv / n) with truncation lag h-1.
/// d should be loss(benchmark) - loss(candidate) so that positive values
/// favour the candidate.
DmResult dm_test_nw(const Eigen::VectorXd& d, int horizon);

/// "***", "**", "*" at the 1%, 5%, 10% levels; empty otherwise.
std::string significance_stars(double p_value);

}  // namespace skewvar
