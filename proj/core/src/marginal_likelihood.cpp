#include "skewvar/marginal_likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "skewvar/errors.hpp"
#include "skewvar/proposal.hpp"

namespace skewvar {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

MlResult estimate_lml(const ModelSpec& spec, const PriorSpec& prior, const Design& design,
                      const ChainOutput& posterior, const MlOptions& options) {
  if (options.n_init < 2 || options.n_cap < options.n_init) {
    throw ConfigError("ml: need 2 <= n_init <= n_cap");
  }
  if (!(posterior.spec == spec)) throw ConfigError("ml: posterior draws belong to another model");
  const ProposalFamily proposal = fit_proposal(spec, posterior.draws);
  const bool route_a1 = options.route == IntegrationRoute::A1;
  const Eigen::MatrixXd& latent_mean =
      route_a1 ? posterior.summary.xi_mean : posterior.summary.h_mean;

  std::vector<double> weights;
  long low_inner = 0;
  long failures = 0;
  auto extend = [&](int n_target) {
    for (int j = static_cast<int>(weights.size()); j < n_target; ++j) {
      Rng rng = make_rng(options.seed, static_cast<std::uint64_t>(j) + 1);
      const ParameterDraw theta = proposal.sample(rng);
      const double lp = log_prior_density(spec, prior, theta);
      if (lp == kNegInf) {
        weights.push_back(kNegInf);
        continue;
      }
      try {
        const IntegratedLikelihood il =
            route_a1 ? integrated_likelihood_A1(spec, theta, design, latent_mean, rng, options.inner)
                     : integrated_likelihood_A2(spec, theta, design, latent_mean, rng, options.inner);
        if (il.low_ess) ++low_inner;
        weights.push_back(il.log_value + lp - proposal.log_density(theta));
      } catch (const NumericError&) {
        ++failures;
        weights.push_back(kNegInf);
      }
    }
  };

  int n = options.n_init;
  extend(n);
  LogMeanExp lme = log_mean_exp(Eigen::Map<const Eigen::VectorXd>(weights.data(), n));
  while (!(lme.rel_variance < options.max_variance) && n < options.n_cap) {
    n = std::min(2 * n, options.n_cap);
    extend(n);
    lme = log_mean_exp(Eigen::Map<const Eigen::VectorXd>(weights.data(), n));
  }
  if (failures > 0) {
    warn("ml: " + std::to_string(failures) + " proposal draws failed numerically (weight 0)");
  }
  if (lme.value == kNegInf) throw NumericError("ml: every importance weight is zero");

  MlResult r;
  r.spec = spec;
  r.logml = lme.value;
  r.variance = lme.rel_variance;
  r.se = std::sqrt(lme.rel_variance);
  r.ess = lme.ess;
  r.n_used = n;
  r.variance_unmet = !(lme.rel_variance < options.max_variance);
  r.low_inner_ess = low_inner > n / 10;
  r.ridge_added = proposal.ridge_added;
  if (r.variance_unmet) {
    warn("ml: variance " + std::to_string(r.variance) + " above target after " +
         std::to_string(n) + " draws");
  }
  return r;
}

std::string MlResult::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = spec.label();
  j["family"] = family_name(spec.family);
  j["sv"] = spec.sv;
  j["p"] = spec.p;
  j["k"] = spec.k;
  j["logml"] = logml;
  j["se"] = se;
  j["variance"] = variance;
  j["ess"] = ess;
  j["n_used"] = n_used;
  j["variance_unmet"] = variance_unmet;
  j["low_inner_ess"] = low_inner_ess;
  j["ridge_added"] = ridge_added;
  return j.dump(2);
}

MlResult MlResult::from_json(const std::string& text) {
  MlResult r;
  try {
    const auto j = nlohmann::json::parse(text);
    r.spec.family = parse_family(j.at("family").get<std::string>());
    r.spec.sv = j.at("sv").get<bool>();
    r.spec.p = j.at("p").get<int>();
    r.spec.k = j.at("k").get<int>();
    r.logml = j.at("logml").get<double>();
    r.se = j.at("se").get<double>();
    r.variance = j.at("variance").get<double>();
    r.ess = j.at("ess").get<double>();
    r.n_used = j.at("n_used").get<int>();
    r.variance_unmet = j.value("variance_unmet", false);
    r.low_inner_ess = j.value("low_inner_ess", false);
    r.ridge_added = j.value("ridge_added", false);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed ml record: ") + e.what());
  }
  return r;
}

}  // namespace skewvar
