#include "skewvar/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "skewvar/errors.hpp"

namespace skewvar {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"data", {"path", "variables", "transforms", "start", "end"}},
      {"model", {"family", "sv", "p", "k"}},
      {"prior", {"l1", "l2", "va", "nu_shape", "nu_rate", "vgamma", "vsigma", "h0_var"}},
      {"mcmc", {"draws", "burn", "thin", "seed", "keep_latents", "c_xi"}},
      {"forecast", {"origin_start", "sample_end", "horizons", "n_paths"}},
      {"ml", {"n_init", "n_cap", "max_variance", "route", "samples", "inner_samples",
              "xi_samples", "seed"}},
      {"simulate", {"T", "allow_unstable", "B", "a", "gamma", "nu", "sigma2", "h0"}},
      {"output", {"dir"}},
  };
  return keys;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("empty entry in list '" + text + "'");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

template <class T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
  const auto node = tree.get_optional<std::string>(key);
  if (!node) return fallback;
  try {
    return tree.get<T>(key);
  } catch (const pt::ptree_error&) {
    throw ConfigError("invalid value '" + *node + "' for " + key);
  }
}

bool get_bool(const pt::ptree& tree, const std::string& key, bool fallback) {
  const auto node = tree.get_optional<std::string>(key);
  if (!node) return fallback;
  if (*node == "true" || *node == "1" || *node == "yes") return true;
  if (*node == "false" || *node == "0" || *node == "no") return false;
  throw ConfigError("invalid boolean '" + *node + "' for " + key);
}

std::optional<YearMonth> get_date(const pt::ptree& tree, const std::string& key) {
  const auto node = tree.get_optional<std::string>(key);
  if (!node || node->empty()) return std::nullopt;
  try {
    return YearMonth::parse(*node);
  } catch (const DataError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v)) {
      throw ConfigError("invalid number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

void RunConfig::require_seed() const {
  if (!seed_set) throw ConfigError("a seed is required ([mcmc] seed or --seed)");
}

RunConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ConfigError("config: unknown section [" + section + "]");
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config: key '" + section + "' outside a section");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("config: unknown key " + section + "." + key);
    }
  }

  RunConfig c;
  c.data_path = get<std::string>(tree, "data.path", "");
  c.variables = split_list(get<std::string>(tree, "data.variables", ""));
  for (const auto& t : split_list(get<std::string>(tree, "data.transforms", ""))) {
    try {
      c.transforms.push_back(parse_transform(t));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("data.transforms: ") + e.what());
    }
  }
  if (!c.transforms.empty() && c.transforms.size() != c.variables.size()) {
    throw ConfigError("data.transforms must list one transform per variable");
  }
  c.start = get_date(tree, "data.start");
  c.end = get_date(tree, "data.end");

  try {
    c.model.family = parse_family(get<std::string>(tree, "model.family", "Gaussian"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  c.model.sv = get_bool(tree, "model.sv", false);
  c.model.p = get<int>(tree, "model.p", 1);
  c.model.k = get<int>(tree, "model.k", c.variables.empty() ? 1 : static_cast<int>(c.variables.size()));
  if (!c.variables.empty() && c.model.k != static_cast<int>(c.variables.size())) {
    throw ConfigError("model.k disagrees with the number of variables");
  }
  c.model.validate();

  PriorSpec& h = c.hyper;
  h.l1 = get(tree, "prior.l1", h.l1);
  h.l2 = get(tree, "prior.l2", h.l2);
  h.va = get(tree, "prior.va", h.va);
  h.nu_shape = get(tree, "prior.nu_shape", h.nu_shape);
  h.nu_rate = get(tree, "prior.nu_rate", h.nu_rate);
  h.vgamma = get(tree, "prior.vgamma", h.vgamma);
  h.vsigma = get(tree, "prior.vsigma", h.vsigma);
  h.h0_var = get(tree, "prior.h0_var", h.h0_var);
  if (!(h.l1 > 0 && h.l2 > 0 && h.va > 0 && h.nu_shape > 0 && h.nu_rate > 0 && h.vgamma > 0 &&
        h.vsigma > 0 && h.h0_var > 0)) {
    throw ConfigError("prior hyperparameters must be positive");
  }

  ChainConfig& ch = c.chain;
  ch.n_draws = get(tree, "mcmc.draws", ch.n_draws);
  ch.n_burn = get(tree, "mcmc.burn", ch.n_burn);
  ch.thin = get(tree, "mcmc.thin", ch.thin);
  ch.keep_latents = get_bool(tree, "mcmc.keep_latents", false);
  ch.c_xi = get(tree, "mcmc.c_xi", ch.c_xi);
  if (tree.get_optional<std::string>("mcmc.seed")) {
    ch.seed = get<std::uint64_t>(tree, "mcmc.seed", 0);
    c.seed_set = true;
  }

  c.origin_start = get_date(tree, "forecast.origin_start");
  c.sample_end = get_date(tree, "forecast.sample_end");
  if (const auto hs = tree.get_optional<std::string>("forecast.horizons")) {
    c.horizons.clear();
    for (double v : parse_number_list(*hs)) {
      if (v < 1 || v != std::floor(v)) throw ConfigError("forecast.horizons must be positive integers");
      c.horizons.push_back(static_cast<int>(v));
    }
  }
  c.n_paths = get(tree, "forecast.n_paths", c.n_paths);

  MlOptions& ml = c.ml;
  ml.n_init = get(tree, "ml.n_init", ml.n_init);
  ml.n_cap = get(tree, "ml.n_cap", ml.n_cap);
  ml.max_variance = get(tree, "ml.max_variance", ml.max_variance);
  const std::string route = get<std::string>(tree, "ml.route", "A1");
  if (route == "A1") {
    ml.route = IntegrationRoute::A1;
  } else if (route == "A2") {
    ml.route = IntegrationRoute::A2;
  } else {
    throw ConfigError("ml.route must be A1 or A2");
  }
  ml.inner.samples = get(tree, "ml.samples", ml.inner.samples);
  ml.inner.inner_samples = get(tree, "ml.inner_samples", ml.inner.inner_samples);
  ml.inner.conditional.xi_samples = get(tree, "ml.xi_samples", ml.inner.conditional.xi_samples);
  ml.inner.conditional.c_xi = ch.c_xi;
  ml.seed = get<std::uint64_t>(tree, "ml.seed", derive_seed(ch.seed, 0x6d6c));

  c.sim_T = get(tree, "simulate.T", c.sim_T);
  c.allow_unstable = get_bool(tree, "simulate.allow_unstable", false);
  c.truth_B = get<std::string>(tree, "simulate.B", "");
  c.truth_a = get<std::string>(tree, "simulate.a", "");
  c.truth_gamma = get<std::string>(tree, "simulate.gamma", "");
  c.truth_nu = get<std::string>(tree, "simulate.nu", "");
  c.truth_sigma2 = get<std::string>(tree, "simulate.sigma2", "");
  c.truth_h0 = get<std::string>(tree, "simulate.h0", "");

  c.output_dir = get<std::string>(tree, "output.dir", ".");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in);
}

Dataset select_window(const Dataset& data, const std::optional<YearMonth>& start,
                      const std::optional<YearMonth>& end) {
  Dataset out;
  out.names = data.names;
  out.transforms = data.transforms;
  std::vector<int> rows;
  for (int t = 0; t < data.T(); ++t) {
    if (start && data.dates[t] < *start) continue;
    if (end && data.dates[t] > *end) continue;
    rows.push_back(t);
  }
  if (rows.empty()) throw DataError("no observations inside the requested window");
  out.values.resize(static_cast<Eigen::Index>(rows.size()), data.k());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    out.values.row(static_cast<Eigen::Index>(j)) = data.values.row(rows[j]);
    out.dates.push_back(data.dates[rows[j]]);
  }
  return out;
}

}  // namespace skewvar
