#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "skewvar/chain.hpp"
#include "skewvar/dataset.hpp"
#include "skewvar/marginal_likelihood.hpp"
#include "skewvar/model.hpp"

namespace skewvar {

/// Flat key = value file with [data], [model], [prior], [mcmc], [forecast],
/// [ml], [simulate] and [output] sections. Unknown keys are rejected.
struct RunConfig {
  // [data]
  std::string data_path;
  std::vector<std::string> variables;
  std::vector<Transform> transforms;
  std::optional<YearMonth> start;
  std::optional<YearMonth> end;

  ModelSpec model;
  PriorSpec hyper;  // scalar hyperparameters; data-driven moments filled later

  ChainConfig chain;
  bool seed_set = false;

  // [forecast]
  std::optional<YearMonth> origin_start;
  std::optional<YearMonth> sample_end;
  std::vector<int> horizons{1, 3, 6, 12};
  int n_paths = 1;

  MlOptions ml;

  // [simulate]
  int sim_T = 300;
  bool allow_unstable = false;
  std::string truth_B;  // comma-separated row-major k x (1 + kp)
  std::string truth_a, truth_gamma, truth_nu, truth_sigma2, truth_h0;

  std::string output_dir = ".";

  /// Throws ConfigError when a stochastic command has no seed.
  void require_seed() const;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Restricts rows to [start, end] when set.
Dataset select_window(const Dataset& data, const std::optional<YearMonth>& start,
                      const std::optional<YearMonth>& end);

/// Parses "1, 2.5, -3" into doubles.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace skewvar
