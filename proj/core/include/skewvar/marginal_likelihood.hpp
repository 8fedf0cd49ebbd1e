#pragma once

#include <cstdint>
#include <string>

#include "skewvar/chain.hpp"
#include "skewvar/integrated_likelihood.hpp"
#include "skewvar/model.hpp"

namespace skewvar {

enum class IntegrationRoute { A1, A2 };

struct MlOptions {
  int n_init = 20000;            // first batch of proposal draws
  int n_cap = 100000;
  double max_variance = 1.0;     // required Var(log ML estimate)
  IntegrationRoute route = IntegrationRoute::A1;
  IntegratedLikelihoodOptions inner;
  std::uint64_t seed = 1;
};

struct MlResult {
  ModelSpec spec;
  double logml = 0.0;
  double se = 0.0;        // delta-method standard error of logml
  double variance = 0.0;  // se^2
  double ess = 0.0;
  int n_used = 0;
  bool variance_unmet = false;
  bool low_inner_ess = false;
  bool ridge_added = false;

  std::string to_json() const;
  static MlResult from_json(const std::string& text);
};

/// Cross-entropy importance sampling estimate of log p(y). Proposal draws
/// are added in doubling batches until Var(log p-hat) < max_variance or
/// n_cap is reached.
MlResult estimate_lml(const ModelSpec& spec, const PriorSpec& prior,
                      const Design& design, const ChainOutput& posterior,
                      const MlOptions& options);

}  // namespace skewvar
