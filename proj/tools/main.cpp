#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skewvar/chain.hpp"
#include "skewvar/config.hpp"
#include "skewvar/csv.hpp"
#include "skewvar/draws_io.hpp"
#include "skewvar/errors.hpp"
#include "skewvar/marginal_likelihood.hpp"
#include "skewvar/minnesota.hpp"
#include "skewvar/predictive.hpp"
#include "skewvar/scoring.hpp"
#include "skewvar/simulate.hpp"

namespace fs = std::filesystem;
using namespace skewvar;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(line);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

// options shared by the config-driven commands
struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string family;
  std::optional<bool> sv;

  void add(CLI::App* cmd) {
    cmd->add_option("-c,--config", config, "run config file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "overrides [mcmc] seed");
    cmd->add_option("-o,--out", out, "output directory (overrides [output] dir)");
    cmd->add_option("--family", family, "overrides [model] family");
    cmd->add_option("--sv", sv, "overrides [model] sv (true/false)");
  }

  RunConfig load() const {
    RunConfig rc = load_config(config);
    if (seed) {
      rc.chain.seed = *seed;
      rc.seed_set = true;
    }
    if (!out.empty()) rc.output_dir = out;
    if (!family.empty()) rc.model.family = parse_family(family);
    if (sv) rc.model.sv = *sv;
    return rc;
  }
};

Dataset load_data(RunConfig& rc) {
  if (rc.data_path.empty()) throw ConfigError("[data] path is required");
  Dataset data = select_window(load_csv(rc.data_path, rc.variables, rc.transforms), rc.start, rc.end);
  if (rc.variables.empty()) rc.model.k = data.k();
  if (data.k() != rc.model.k) throw ConfigError("model.k disagrees with the data");
  data.require_sample_size(rc.model.p);
  return data;
}

fs::path out_path(const RunConfig& rc, const std::string& name) {
  fs::create_directories(rc.output_dir);
  return fs::path(rc.output_dir) / name;
}

// -- simulate ---------------------------------------------------------------

void set_truth(Eigen::VectorXd& target, const std::string& text, const char* what) {
  if (text.empty()) return;
  const std::vector<double> v = parse_number_list(text);
  if (static_cast<Eigen::Index>(v.size()) != target.size()) {
    throw ConfigError(std::string("simulate.") + what + " needs " + std::to_string(target.size()) +
                      " values");
  }
  target = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}

ParameterDraw truth_from(const RunConfig& rc) {
  const ModelSpec& spec = rc.model;
  ParameterDraw t = example_parameters(spec);
  if (!rc.truth_B.empty()) {
    const std::vector<double> v = parse_number_list(rc.truth_B);
    if (static_cast<Eigen::Index>(v.size()) != t.B.size()) {
      throw ConfigError("simulate.B needs k(1 + kp) = " + std::to_string(t.B.size()) + " values");
    }
    for (int i = 0; i < t.B.rows(); ++i) {
      for (int j = 0; j < t.B.cols(); ++j) t.B(i, j) = v[i * t.B.cols() + j];
    }
  }
  set_truth(t.a, rc.truth_a, "a");
  if (has_skew(spec.family)) set_truth(t.gamma, rc.truth_gamma, "gamma");
  set_truth(t.nu, rc.truth_nu, "nu");
  if (spec.sv) set_truth(t.sigma2, rc.truth_sigma2, "sigma2");
  set_truth(t.h0, rc.truth_h0, "h0");
  t.validate(spec);
  return t;
}

nlohmann::ordered_json params_json(const ParameterDraw& d) {
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  nlohmann::ordered_json j;
  std::vector<std::vector<double>> B;
  for (int i = 0; i < d.B.rows(); ++i) {
    B.emplace_back();
    for (int c = 0; c < d.B.cols(); ++c) B.back().push_back(d.B(i, c));
  }
  j["B"] = B;
  j["a"] = vec(d.a);
  j["gamma"] = vec(d.gamma);
  j["nu"] = vec(d.nu);
  j["sigma2"] = vec(d.sigma2);
  j["h0"] = vec(d.h0);
  return j;
}

int cmd_simulate(const Common& common) {
  RunConfig rc = common.load();
  rc.require_seed();
  rc.model.validate();
  const ParameterDraw truth = truth_from(rc);
  const SimulatedData sim = simulate_dataset(rc.model, truth, rc.sim_T, rc.chain.seed, rc.allow_unstable);
  write_csv(sim.data, out_path(rc, "simulated.csv").string());

  auto lat = open_out(out_path(rc, "simulated_latents.csv"));
  lat << "date";
  for (int i = 0; i < sim.latents.logh.cols(); ++i) lat << ",logh_" << i + 1;
  for (int i = 0; i < sim.latents.xi.cols(); ++i) lat << ",xi_" << i + 1;
  lat << '\n';
  for (int t = 0; t < sim.latents.logh.rows(); ++t) {
    lat << sim.data.dates[t + rc.model.p].str();
    for (int i = 0; i < sim.latents.logh.cols(); ++i) lat << ',' << num(sim.latents.logh(t, i));
    for (int i = 0; i < sim.latents.xi.cols(); ++i) lat << ',' << num(sim.latents.xi(t, i));
    lat << '\n';
  }

  nlohmann::ordered_json j;
  j["model"] = rc.model.label();
  j["p"] = rc.model.p;
  j["k"] = rc.model.k;
  j["T"] = rc.sim_T;
  j["seed"] = rc.chain.seed;
  j["truth"] = params_json(truth);
  open_out(out_path(rc, "truth.json")) << j.dump(2) << '\n';
  std::cout << "simulated " << rc.sim_T << " periods of " << rc.model.label() << " into "
            << rc.output_dir << '\n';
  return 0;
}

// -- estimate ---------------------------------------------------------------

int cmd_estimate(const Common& common, bool export_csv) {
  RunConfig rc = common.load();
  rc.require_seed();
  const Dataset data = load_data(rc);
  const PriorSpec prior = default_prior(rc.model, data.values, rc.hyper);
  const Design design = build_design(data, rc.model.p);
  const ChainOutput post = run_chain(rc.model, prior, design, rc.chain);

  PosteriorFile file;
  file.posterior = post;
  file.prior = prior;
  file.seed = rc.chain.seed;
  file.T = static_cast<int>(design.Y.rows());
  const std::string tag = rc.model.label();
  save_draws(out_path(rc, tag + ".draws").string(), file);
  if (export_csv) {
    auto out = open_out(out_path(rc, tag + "_draws.csv"));
    export_draws_csv(file, out);
  }

  const AcceptanceSummary& a = post.acceptance;
  nlohmann::ordered_json j;
  j["model"] = tag;
  j["sweeps"] = rc.chain.n_draws;
  j["burn"] = rc.chain.n_burn;
  j["retained"] = post.draws.size();
  j["acceptance"] = {{"B", a.B},   {"gamma", a.gamma},   {"a", a.a}, {"h", a.h},
                     {"sigma2", a.sigma2}, {"nu", a.nu}, {"nu_rank", a.nu_rank}, {"xi", a.xi}};
  j["nu_log_step"] = std::vector<double>(a.nu_log_step.data(), a.nu_log_step.data() + a.nu_log_step.size());
  open_out(out_path(rc, tag + "_acceptance.json")) << j.dump(2) << '\n';

  std::cout << tag << ": " << post.draws.size() << " draws kept\n  acceptance";
  for (const auto& [name, v] : std::vector<std::pair<const char*, double>>{
           {"B", a.B}, {"gamma", a.gamma}, {"a", a.a}, {"h", a.h},
           {"sigma2", a.sigma2}, {"nu", a.nu}, {"nu_rank", a.nu_rank}, {"xi", a.xi}}) {
    std::cout << ' ' << name << '=' << num(v);
  }
  std::cout << '\n';
  return 0;
}

// -- lml --------------------------------------------------------------------

int cmd_lml(const Common& common, std::string draws_path) {
  RunConfig rc = common.load();
  const Dataset data = load_data(rc);
  const std::string tag = rc.model.label();
  if (draws_path.empty()) draws_path = out_path(rc, tag + ".draws").string();
  const PosteriorFile file = load_draws(draws_path, rc.model);
  const Design design = build_design(data, rc.model.p);
  if (file.T != design.Y.rows()) {
    throw DataError("draws were estimated on " + std::to_string(file.T) +
                    " periods but the data have " + std::to_string(design.Y.rows()));
  }
  if (common.seed) rc.ml.seed = derive_seed(*common.seed, 0x6d6c);
  const MlResult r = estimate_lml(rc.model, file.prior, design, file.posterior, rc.ml);
  open_out(out_path(rc, tag + "_ml.json")) << r.to_json() << '\n';
  std::cout << tag << ": log ML " << num(r.logml) << " (se " << num(r.se) << ", "
            << r.n_used << " draws)" << (r.variance_unmet ? " variance target unmet" : "") << '\n';
  return 0;
}

// -- forecast ---------------------------------------------------------------

constexpr const char* kScoreHeader =
    "model,origin,date,horizon,variable,name,mean,actual,sq_error,log_score,crps,pit,floored";

int cmd_forecast(const Common& common, int threads) {
  RunConfig rc = common.load();
  rc.require_seed();
  const Dataset data = load_data(rc);
  if (!rc.origin_start || !rc.sample_end) {
    throw ConfigError("[forecast] origin_start and sample_end are required");
  }
  ForecastConfig fc;
  fc.origin_start = data.index_of(*rc.origin_start);
  fc.sample_end = data.index_of(*rc.sample_end);
  fc.horizons = rc.horizons;
  fc.n_paths = rc.n_paths;
  const std::vector<OriginScore> scores =
      recursive_forecast(rc.model, rc.hyper, data, fc, rc.chain, threads);

  const std::string tag = rc.model.label();
  auto out = open_out(out_path(rc, tag + "_scores.csv"));
  out << kScoreHeader << '\n';
  for (const auto& s : scores) {
    out << tag << ',' << s.origin << ',' << data.dates[s.origin].str() << ',' << s.horizon << ','
        << s.variable << ',' << data.names[s.variable] << ',' << num(s.mean) << ','
        << num(s.actual) << ',' << num(s.sq_error) << ',' << num(s.log_score) << ','
        << num(s.crps) << ',' << num(s.pit) << ',' << (s.log_score_floored ? 1 : 0) << '\n';
  }
  std::cout << tag << ": " << scores.size() << " scores over "
            << fc.sample_end - fc.origin_start << " origins\n";
  return 0;
}

// -- evaluate ---------------------------------------------------------------

struct ScoreRow {
  OriginScore s;
  std::string date, name;
};

struct ModelScores {
  std::string model;
  std::vector<ScoreRow> rows;
};

ModelScores read_scores(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line;
  if (!std::getline(in, line) || line != kScoreHeader) {
    throw DataError(path + ": not a score file");
  }
  ModelScores m;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 13) throw DataError(path + ":" + std::to_string(line_no) + ": expected 13 fields");
    try {
      if (m.model.empty()) m.model = f[0];
      if (f[0] != m.model) throw DataError(path + ": mixes models");
      ScoreRow r;
      r.s.origin = std::stoi(f[1]);
      r.date = f[2];
      r.s.horizon = std::stoi(f[3]);
      r.s.variable = std::stoi(f[4]);
      r.name = f[5];
      r.s.mean = std::stod(f[6]);
      r.s.actual = std::stod(f[7]);
      r.s.sq_error = std::stod(f[8]);
      r.s.log_score = std::stod(f[9]);
      r.s.crps = std::stod(f[10]);
      r.s.pit = std::stod(f[11]);
      r.s.log_score_floored = f[12] == "1";
      m.rows.push_back(r);
    } catch (const std::invalid_argument&) {
      throw DataError(path + ":" + std::to_string(line_no) + ": bad number");
    } catch (const std::out_of_range&) {
      throw DataError(path + ":" + std::to_string(line_no) + ": number out of range");
    }
  }
  if (m.rows.empty()) throw DataError(path + ": no scores");
  return m;
}

using CellKey = std::pair<int, int>;  // horizon, variable

// origin -> row, per (horizon, variable)
std::map<CellKey, std::map<int, const ScoreRow*>> index_rows(const ModelScores& m) {
  std::map<CellKey, std::map<int, const ScoreRow*>> out;
  for (const auto& r : m.rows) out[{r.s.horizon, r.s.variable}][r.s.origin] = &r;
  return out;
}

int cmd_evaluate(const std::vector<std::string>& files, std::string benchmark,
                 const std::string& out_dir) {
  std::vector<ModelScores> models;
  for (const auto& f : files) models.push_back(read_scores(f));
  if (benchmark.empty()) benchmark = models.front().model;
  const auto bench_it = std::find_if(models.begin(), models.end(),
                                     [&](const ModelScores& m) { return m.model == benchmark; });
  if (bench_it == models.end()) throw ConfigError("benchmark " + benchmark + " not among the score files");
  const auto bench = index_rows(*bench_it);

  auto metrics = open_out(fs::path(out_dir) / "metrics.csv");
  metrics << "model,variable,horizon,n,msfe,msfe_ratio,msfe_stars,lp,lp_diff,lp_stars,crps,"
             "crps_ratio,crps_stars\n";
  auto pit = open_out(fs::path(out_dir) / "pit.csv");
  pit << "model,variable,horizon,bin_lo,bin_hi,count,share,chi2_p\n";
  auto cbf = open_out(fs::path(out_dir) / "cum_bf.csv");
  cbf << "model,benchmark,variable,horizon,origin,date,cum_log_bf\n";

  for (const auto& m : models) {
    for (const auto& [cell, rows] : index_rows(m)) {
      const auto& [h, var] = cell;
      const std::string name = rows.begin()->second->name;
      const auto b = bench.find(cell);
      std::vector<int> common_origins;
      for (const auto& [o, r] : rows) {
        if (b != bench.end() && b->second.count(o)) common_origins.push_back(o);
      }
      const int n = static_cast<int>(common_origins.size());
      if (n == 0) throw DataError(m.model + ": no origins shared with " + benchmark);

      Eigen::VectorXd se(n), lp(n), cr(n), bse(n), blp(n), bcr(n);
      for (int i = 0; i < n; ++i) {
        const OriginScore& s = rows.at(common_origins[i])->s;
        const OriginScore& t = b->second.at(common_origins[i])->s;
        se(i) = s.sq_error;
        lp(i) = s.log_score;
        cr(i) = s.crps;
        bse(i) = t.sq_error;
        blp(i) = t.log_score;
        bcr(i) = t.crps;
      }
      const bool is_bench = m.model == benchmark;
      auto stars = [&](const Eigen::VectorXd& d) {
        if (is_bench) return std::string();
        const DmResult r = dm_test_nw(d, h);
        return r.defined ? significance_stars(r.p_value) : std::string();
      };
      metrics << m.model << ',' << name << ',' << h << ',' << n << ',' << num(se.mean()) << ','
              << num(se.mean() / bse.mean()) << ',' << stars(bse - se) << ',' << num(lp.mean())
              << ',' << num(lp.mean() - blp.mean()) << ',' << stars(lp - blp) << ','
              << num(cr.mean()) << ',' << num(cr.mean() / bcr.mean()) << ',' << stars(bcr - cr)
              << '\n';

      std::vector<double> pits;
      for (const auto& [o, r] : rows) pits.push_back(r->s.pit);
      const PitHistogram hist = pit_histogram(pits);
      const int bins = static_cast<int>(hist.counts.size());
      const double pv = hist.uniform_p_value();
      for (int j = 0; j < bins; ++j) {
        pit << m.model << ',' << name << ',' << h << ',' << num(double(j) / bins) << ','
            << num(double(j + 1) / bins) << ',' << hist.counts[j] << ','
            << num(double(hist.counts[j]) / hist.total) << ',' << num(pv) << '\n';
      }

      if (!is_bench) {
        const Eigen::VectorXd c = cum_log_bf(blp, lp);
        for (int i = 0; i < n; ++i) {
          cbf << m.model << ',' << benchmark << ',' << name << ',' << h << ','
              << common_origins[i] << ',' << rows.at(common_origins[i])->date << ','
              << num(c(i)) << '\n';
        }
      }
    }
  }
  std::cout << "evaluated " << models.size() << " models against " << benchmark << " into "
            << out_dir << '\n';
  return 0;
}

// -- compare ----------------------------------------------------------------

int cmd_compare(const std::vector<std::string>& files, std::string benchmark,
                const std::string& out_file) {
  std::vector<MlResult> results;
  for (const auto& f : files) {
    try {
      results.push_back(MlResult::from_json(slurp(f)));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw DataError(f + ": " + e.what());
    }
  }
  if (benchmark.empty()) benchmark = results.front().spec.label();
  const auto b = std::find_if(results.begin(), results.end(),
                              [&](const MlResult& r) { return r.spec.label() == benchmark; });
  if (b == results.end()) throw ConfigError("benchmark " + benchmark + " not among the ml records");

  std::ostringstream table;
  table << "model,family,sv,p,k,logml,se,log_bf,ess,n_used,variance_unmet\n";
  for (const auto& r : results) {
    table << r.spec.label() << ',' << family_name(r.spec.family) << ',' << (r.spec.sv ? 1 : 0)
          << ',' << r.spec.p << ',' << r.spec.k << ',' << num(r.logml) << ',' << num(r.se) << ','
          << num(r.logml - b->logml) << ',' << num(r.ess) << ',' << r.n_used << ','
          << (r.variance_unmet ? 1 : 0) << '\n';
  }
  if (out_file.empty()) {
    std::cout << table.str();
  } else {
    open_out(out_file) << table.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VARs with GH skew-t errors and stochastic volatility"};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "silence warnings");

  Common sim_opts, est_opts, lml_opts, fc_opts;
  auto* sim = app.add_subcommand("simulate", "simulate a data set from [simulate] and [model]");
  sim_opts.add(sim);

  auto* est = app.add_subcommand("estimate", "run the Gibbs sampler and save the draws");
  est_opts.add(est);
  bool export_csv = false;
  est->add_flag("--csv", export_csv, "also export the draws as CSV");

  auto* lml = app.add_subcommand("lml", "log marginal likelihood from saved draws");
  lml_opts.add(lml);
  std::string draws_path;
  lml->add_option("--draws", draws_path, "draw file (default <out>/<model>.draws)");

  auto* fc = app.add_subcommand("forecast", "recursive out-of-sample forecasts and scores");
  fc_opts.add(fc);
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  fc->add_option("-j,--threads", threads, "origins estimated in parallel")->check(CLI::PositiveNumber);

  auto* ev = app.add_subcommand("evaluate", "metric tables, PIT and cumulative Bayes factors");
  std::vector<std::string> score_files;
  std::string ev_bench, ev_out = ".";
  ev->add_option("scores", score_files, "score files written by forecast")->required()->check(CLI::ExistingFile);
  ev->add_option("-b,--benchmark", ev_bench, "benchmark model label (default: first file)");
  ev->add_option("-o,--out", ev_out, "output directory");

  auto* cmp = app.add_subcommand("compare", "join ml records into one table");
  std::vector<std::string> ml_files;
  std::string cmp_bench, cmp_out;
  cmp->add_option("records", ml_files, "ml records written by lml")->required()->check(CLI::ExistingFile);
  cmp->add_option("-b,--benchmark", cmp_bench, "model the log Bayes factors are taken against");
  cmp->add_option("-o,--out", cmp_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  set_quiet(quiet);

  try {
    if (*sim) return cmd_simulate(sim_opts);
    if (*est) return cmd_estimate(est_opts, export_csv);
    if (*lml) return cmd_lml(lml_opts, draws_path);
    if (*fc) return cmd_forecast(fc_opts, threads);
    if (*ev) return cmd_evaluate(score_files, ev_bench, ev_out);
    if (*cmp) return cmd_compare(ml_files, cmp_bench, cmp_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
