#include "skewvar/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <array>

#include <boost/math/special_functions/gamma.hpp>
#include <stdexcept>
#include <string>

#include "skewvar/densities.hpp"
#include "skewvar/errors.hpp"
#include "skewvar/ffbs.hpp"
#include "skewvar/shocks.hpp"

namespace skewvar {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::MatrixXd current_A(const ChainState& state, const Problem& problem) {
  return unit_lower_triangular(state.params.a, problem.spec.k);
}

Eigen::MatrixXd current_residuals(const ChainState& state, const Problem& problem) {
  return residuals(problem.design, state.params.B);
}

GaussianConditional solve_conditional(Eigen::MatrixXd precision, const Eigen::VectorXd& rhs,
                                      const char* block) {
  precision = 0.5 * (precision + precision.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success) {
    throw NumericError(std::string("posterior precision of ") + block +
                       " is not positive definite (min diagonal " +
                       std::to_string(precision.diagonal().minCoeff()) + ")");
  }
  GaussianConditional out{llt.solve(rhs), std::move(precision)};
  if (!out.mean.allFinite()) {
    throw NumericError(std::string("non-finite posterior mean for ") + block);
  }
  return out;
}

Eigen::VectorXd draw_from(const GaussianConditional& cond, Rng& rng, const char* block) {
  Eigen::LLT<Eigen::MatrixXd> llt(cond.precision);
  if (llt.info() != Eigen::Success) {
    throw NumericError(std::string("posterior precision of ") + block +
                       " is not positive definite");
  }
  Eigen::VectorXd draw = mvn_sample_precision(cond.mean, llt.matrixL(), rng);
  if (!draw.allFinite()) throw NumericError(std::string("non-finite draw for ") + block);
  return draw;
}

bool metropolis_accept(double log_ratio, Rng& rng, double& prob) {
  if (std::isnan(log_ratio)) log_ratio = kNegInf;
  prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
  return log_ratio >= 0.0 || uniform01(rng) < prob;
}

// log pi(W_t | rest) for the multi and shared structures, up to a constant.
double mixing_log_target(const ModelSpec& spec, const Eigen::MatrixXd& A,
                         const Eigen::VectorXd& gamma, const Eigen::VectorXd& nu,
                         const Eigen::VectorXd& xi_full, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& logh) {
  const Eigen::VectorXd e = structural_shocks(spec, A, gamma, xi_full, u);
  double lp = 0.0;
  for (int i = 0; i < spec.k; ++i) {
    lp += -0.5 * std::log(xi_full(i)) - 0.5 * e(i) * e(i) * std::exp(-logh(i));
  }
  if (shared_mixing(spec.family)) {
    lp += invgamma_logpdf(xi_full(0), 0.5 * nu(0), 0.5 * nu(0));
  } else {
    for (int i = 0; i < spec.k; ++i) {
      lp += invgamma_logpdf(xi_full(i), 0.5 * nu(i), 0.5 * nu(i));
    }
  }
  return lp;
}

// Orthogonal structure: xi_it enters only through e_it = (A u_t)_i.
double orthogonal_log_target(double xi, double e, double gamma, double h, double nu) {
  const double r = e - xi * gamma;
  return -0.5 * std::log(xi) - 0.5 * r * r / (xi * h) + invgamma_logpdf(xi, 0.5 * nu, 0.5 * nu);
}

constexpr double kLogT4Const = -0.98082925301172623;  // lgamma(2.5) - lgamma(2) - log(4 pi)/2

double t4_logpdf(double z, double mode, double scale) {
  const double d = (z - mode) / scale;
  return kLogT4Const - std::log(scale) - 2.5 * std::log1p(0.25 * d * d);
}

// Mode and curvature of log pi(log xi) for the orthogonal skew structure:
// f(z) = -(nu+1)/2 z - b exp(-z) - c exp(z), b = (e^2/h + nu)/2, c = gamma^2/(2h).
bool orthogonal_log_mode(double e, double gamma, double h, double nu, double& mode,
                         double& scale) {
  const double a = 0.5 * (nu + 1.0);
  const double b = 0.5 * (e * e / h + nu);
  const double c = 0.5 * gamma * gamma / h;
  const double w = 2.0 * b / (a + std::sqrt(a * a + 4.0 * b * c));
  mode = std::log(w);
  const double curvature = b / w + c * w;
  scale = 1.0 / std::sqrt(curvature);
  return std::isfinite(mode) && std::isfinite(scale) && scale > 0.0;
}

// One window of Robbins-Monro adaptation of log random-walk steps toward the
// target acceptance rate.
void robbins_monro(Eigen::VectorXd& log_step, Eigen::VectorXd& window_accept, int& window_count,
                   int& n_adaptations, const MhTuning& tune) {
  if (++window_count < tune.adapt_window) return;
  ++n_adaptations;
  const double step = 1.0 / std::pow(static_cast<double>(n_adaptations), 0.6);
  for (Eigen::Index g = 0; g < log_step.size(); ++g) {
    const double rate = window_accept(g) / window_count;
    log_step(g) = std::clamp(log_step(g) + (rate - tune.target_accept_nu) * step, -10.0, 10.0);
  }
  window_accept.setZero();
  window_count = 0;
}

}  // namespace

ChainState initial_state(const Problem& problem, std::uint64_t seed) {
  const ModelSpec& spec = problem.spec;
  spec.validate();
  problem.prior.validate(spec);
  const int k = spec.k;
  const int m = spec.n_coef();
  const int T = problem.design.T();
  ChainState st;
  st.params.B = Eigen::Map<const Eigen::MatrixXd>(problem.prior.b0.data(), k, m);
  if (T > 2 * m) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(problem.design.X);
    if (qr.rank() == m) st.params.B = qr.solve(problem.design.Y).transpose();
  }
  st.params.a = Eigen::VectorXd::Zero(spec.n_a());
  st.params.gamma = Eigen::VectorXd::Zero(k);
  const double nu0 = std::max(problem.prior.nu_shape / problem.prior.nu_rate, 10.0);
  st.params.nu = Eigen::VectorXd::Constant(spec.n_nu(), nu0);
  st.params.sigma2 = Eigen::VectorXd::Constant(k, spec.sv ? 0.05 : 0.0);
  st.params.h0 = problem.prior.h0_mean;
  st.latents.xi = Eigen::MatrixXd::Ones(T, has_mixing(spec.family) ? spec.n_xi_cols() : k);
  st.latents.logh = st.params.h0.transpose().replicate(T, 1);
  st.mix_indicators = Eigen::MatrixXi::Zero(T, k);
  st.tuning.log_step_nu = Eigen::VectorXd::Zero(spec.n_nu());
  st.tuning.window_accept = Eigen::VectorXd::Zero(spec.n_nu());
  st.tuning.log_step_nu_rank = Eigen::VectorXd::Zero(spec.n_nu());
  st.tuning.window_accept_rank = Eigen::VectorXd::Zero(spec.n_nu());
  st.rng = make_rng(seed);
  return st;
}

GaussianConditional coefficient_conditional(const ChainState& state, const Problem& problem) {
  const ModelSpec& spec = problem.spec;
  const Design& d = problem.design;
  const int k = spec.k;
  const int m = spec.n_coef();
  const Eigen::MatrixXd A = current_A(state, problem);

  Eigen::MatrixXd P = problem.prior.vb0.cwiseInverse().asDiagonal();
  Eigen::VectorXd rhs = problem.prior.b0.cwiseQuotient(problem.prior.vb0);
  Eigen::MatrixXd S(k, k);
  Eigen::VectorXd Sy(k);
  for (int t = 0; t < d.T(); ++t) {
    const Eigen::VectorXd xi = expand_xi(spec, state.latents.xi, t);
    const Eigen::VectorXd logh = state.latents.logh.row(t).transpose();
    const Eigen::MatrixXd Q = precision_factor(spec, A, xi, logh);
    S.noalias() = Q.transpose() * Q;
    Eigen::VectorXd yt = d.Y.row(t).transpose();
    if (has_skew(spec.family)) yt -= skew_mean(spec, A, state.params.gamma, xi);
    Sy.noalias() = S * yt;
    for (int a = 0; a < m; ++a) {
      const double xa = d.X(t, a);
      rhs.segment(a * k, k) += xa * Sy;
      for (int b = 0; b <= a; ++b) {
        P.block(a * k, b * k, k, k) += (xa * d.X(t, b)) * S;
      }
    }
  }
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < a; ++b) {
      P.block(b * k, a * k, k, k) = P.block(a * k, b * k, k, k).transpose();
    }
  }
  return solve_conditional(std::move(P), rhs, "vec(B)");
}

GaussianConditional skewness_conditional(const ChainState& state, const Problem& problem) {
  const ModelSpec& spec = problem.spec;
  const Design& d = problem.design;
  const int k = spec.k;
  const Eigen::MatrixXd A = current_A(state, problem);
  const Eigen::MatrixXd U = current_residuals(state, problem);
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(k, k) / problem.prior.vgamma;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  Eigen::MatrixXd G(k, k);
  for (int t = 0; t < d.T(); ++t) {
    const Eigen::VectorXd xi = expand_xi(spec, state.latents.xi, t);
    const Eigen::VectorXd logh = state.latents.logh.row(t).transpose();
    const Eigen::MatrixXd Q = precision_factor(spec, A, xi, logh);
    const Eigen::VectorXd z = Q * U.row(t).transpose();
    // G = Q M_t with M_t = W_t (multi) or A^{-1} W_t (orthogonal)
    if (orthogonal_mixing(spec.family)) {
      G.setZero();
      for (int i = 0; i < k; ++i) G(i, i) = std::sqrt(xi(i)) * std::exp(-0.5 * logh(i));
    } else {
      G = Q * xi.asDiagonal();
    }
    P.noalias() += G.transpose() * G;
    rhs.noalias() += G.transpose() * z;
  }
  return solve_conditional(std::move(P), rhs, "gamma");
}

GaussianConditional coefficient_skewness_conditional(const ChainState& state,
                                                     const Problem& problem) {
  const ModelSpec& spec = problem.spec;
  const Design& d = problem.design;
  const int k = spec.k;
  const int m = spec.n_coef();
  const int nb = k * m;
  const Eigen::MatrixXd A = current_A(state, problem);

  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(nb + k, nb + k);
  P.topLeftCorner(nb, nb).diagonal() = problem.prior.vb0.cwiseInverse();
  P.bottomRightCorner(k, k).diagonal().setConstant(1.0 / problem.prior.vgamma);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nb + k);
  rhs.head(nb) = problem.prior.b0.cwiseQuotient(problem.prior.vb0);
  Eigen::MatrixXd S(k, k), G(k, k), SM(k, k);
  Eigen::VectorXd Sy(k);
  for (int t = 0; t < d.T(); ++t) {
    const Eigen::VectorXd xi = expand_xi(spec, state.latents.xi, t);
    const Eigen::VectorXd logh = state.latents.logh.row(t).transpose();
    const Eigen::MatrixXd Q = precision_factor(spec, A, xi, logh);
    if (orthogonal_mixing(spec.family)) {
      G.setZero();
      for (int i = 0; i < k; ++i) G(i, i) = std::sqrt(xi(i)) * std::exp(-0.5 * logh(i));
    } else {
      G = Q * xi.asDiagonal();
    }
    S.noalias() = Q.transpose() * Q;
    SM.noalias() = Q.transpose() * G;
    const Eigen::VectorXd yt = d.Y.row(t).transpose();
    Sy.noalias() = S * yt;
    for (int a = 0; a < m; ++a) {
      const double xa = d.X(t, a);
      rhs.segment(a * k, k) += xa * Sy;
      P.block(nb, a * k, k, k) += xa * SM.transpose();
      for (int b = 0; b <= a; ++b) {
        P.block(a * k, b * k, k, k) += (xa * d.X(t, b)) * S;
      }
    }
    P.bottomRightCorner(k, k).noalias() += G.transpose() * G;
    rhs.tail(k).noalias() += SM.transpose() * yt;
  }
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < a; ++b) {
      P.block(b * k, a * k, k, k) = P.block(a * k, b * k, k, k).transpose();
    }
  }
  P.topRightCorner(nb, k) = P.bottomLeftCorner(k, nb).transpose();
  return solve_conditional(std::move(P), rhs, "(vec(B), gamma)");
}

GaussianConditional contemporaneous_conditional(const ChainState& state, const Problem& problem,
                                                int row) {
  const ModelSpec& spec = problem.spec;
  const Design& d = problem.design;
  if (row < 1 || row >= spec.k) throw std::out_of_range("contemporaneous_conditional: row");
  const Eigen::MatrixXd U = current_residuals(state, problem);
  const auto& gamma = state.params.gamma;
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(row, row) / problem.prior.va;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(row);
  Eigen::VectorXd z(row);
  const bool ortho = orthogonal_mixing(spec.family);
  for (int t = 0; t < d.T(); ++t) {
    const Eigen::VectorXd xi = expand_xi(spec, state.latents.xi, t);
    const double h = std::exp(state.latents.logh(t, row));
    double v, omega;
    if (ortho) {
      v = U(t, row) - xi(row) * gamma(row);
      z = -U.row(t).head(row).transpose();
      omega = 1.0 / (xi(row) * h);
    } else {
      const Eigen::VectorXd ut =
          (U.row(t).transpose() - xi.cwiseProduct(gamma)).cwiseQuotient(xi.cwiseSqrt());
      v = ut(row);
      z = -ut.head(row);
      omega = 1.0 / h;
    }
    P.noalias() += omega * z * z.transpose();
    rhs += omega * v * z;
  }
  return solve_conditional(std::move(P), rhs, "a");
}

void draw_B(ChainState& state, const Problem& problem) {
  const GaussianConditional cond = coefficient_conditional(state, problem);
  const Eigen::VectorXd b = draw_from(cond, state.rng, "vec(B)");
  state.params.B = Eigen::Map<const Eigen::MatrixXd>(b.data(), problem.spec.k,
                                                     problem.spec.n_coef());
  state.acceptance.B.record(1.0);
}

void draw_gamma(ChainState& state, const Problem& problem) {
  if (!has_skew(problem.spec.family)) return;
  const GaussianConditional cond = skewness_conditional(state, problem);
  state.params.gamma = draw_from(cond, state.rng, "gamma");
  state.acceptance.gamma.record(1.0);
}

void draw_B_gamma(ChainState& state, const Problem& problem) {
  if (!has_skew(problem.spec.family)) {
    draw_B(state, problem);
    return;
  }
  const int k = problem.spec.k;
  const GaussianConditional cond = coefficient_skewness_conditional(state, problem);
  const Eigen::VectorXd z = draw_from(cond, state.rng, "(vec(B), gamma)");
  state.params.B = Eigen::Map<const Eigen::MatrixXd>(z.data(), k, problem.spec.n_coef());
  state.params.gamma = z.tail(k);
  state.acceptance.B.record(1.0);
  state.acceptance.gamma.record(1.0);
}

void draw_A(ChainState& state, const Problem& problem) {
  const int k = problem.spec.k;
  if (k < 2) return;
  Eigen::VectorXd a = state.params.a;
  for (int row = 1; row < k; ++row) {
    const GaussianConditional cond = contemporaneous_conditional(state, problem, row);
    a.segment(row * (row - 1) / 2, row) = draw_from(cond, state.rng, "a");
  }
  state.params.a = a;
  state.acceptance.a.record(1.0);
}

void draw_h(ChainState& state, const Problem& problem) {
  const ModelSpec& spec = problem.spec;
  const int k = spec.k;
  const int T = problem.design.T();
  const KscMixture& ksc = ksc_table();
  const Eigen::MatrixXd A = current_A(state, problem);
  const Eigen::MatrixXd U = current_residuals(state, problem);

  Eigen::MatrixXd esq(T, k);
  for (int t = 0; t < T; ++t) {
    const Eigen::VectorXd xi = expand_xi(spec, state.latents.xi, t);
    const Eigen::VectorXd e =
        structural_shocks(spec, A, state.params.gamma, xi, U.row(t).transpose());
    esq.row(t) = e.array().square().transpose();
  }

  if (!spec.sv) {
    // exact: v = exp(h0) from IG(T/2, S/2), corrected by the normal prior on log v
    for (int i = 0; i < k; ++i) {
      const double m = problem.prior.h0_mean(i), V = problem.prior.h0_var;
      const double ss = esq.col(i).sum();
      double h = state.params.h0(i);
      if (T == 0 || !(ss > 0.0)) {
        h = m + std::sqrt(V) * std_normal(state.rng);
        state.acceptance.h.record(1.0);
      } else {
        const double prop = std::log(invgamma_sample(0.5 * T, 0.5 * ss, state.rng));
        const double log_ratio =
            (-(prop - m) * (prop - m) + (h - m) * (h - m)) / (2.0 * V);
        double prob = 0.0;
        if (std::isfinite(prop) && metropolis_accept(log_ratio, state.rng, prob)) h = prop;
        state.acceptance.h.record(prob);
      }
      state.params.h0(i) = h;
      state.latents.logh.col(i).setConstant(h);
    }
    return;
  }

  const Eigen::MatrixXd ystar = (esq.array() + problem.options.log_square_offset).log();

  LocalLevelModel model;
  model.obs.resize(T);
  model.obs_var.resize(T);
  model.init_var = problem.prior.h0_var;
  std::array<double, 7> w{};
  for (int i = 0; i < k; ++i) {
    // indicators given the current volatility path
    for (int t = 0; t < T; ++t) {
      const double resid = ystar(t, i) - state.latents.logh(t, i);
      double total = 0.0;
      double max_log = kNegInf;
      std::array<double, 7> lw{};
      for (int j = 0; j < 7; ++j) {
        lw[j] = std::log(ksc.prob[j]) + normal_logpdf(resid, ksc.mean[j], ksc.var[j]);
        max_log = std::max(max_log, lw[j]);
      }
      for (int j = 0; j < 7; ++j) {
        w[j] = std::exp(lw[j] - max_log);
        total += w[j];
      }
      double u = uniform01(state.rng) * total;
      int s = 6;
      for (int j = 0; j < 7; ++j) {
        u -= w[j];
        if (u <= 0.0) {
          s = j;
          break;
        }
      }
      state.mix_indicators(t, i) = s;
      model.obs(t) = ystar(t, i) - ksc.mean[s];
      model.obs_var(t) = ksc.var[s];
    }
    model.state_var = state.params.sigma2(i);
    model.init_mean = problem.prior.h0_mean(i);
    Eigen::VectorXd path;
    try {
      path = sample_local_level(model, state.rng);
    } catch (const NumericError& err) {
      throw NumericError(std::string(err.what()) + ", equation " + std::to_string(i));
    }
    state.params.h0(i) = path(0);
    state.latents.logh.col(i) = path.tail(T);
  }
  state.acceptance.h.record(1.0);
}

void draw_sigma2(ChainState& state, const Problem& problem) {
  const ModelSpec& spec = problem.spec;
  if (!spec.sv) return;
  const int T = problem.design.T();
  for (int i = 0; i < spec.k; ++i) {
    const double current = state.params.sigma2(i);
    if (T == 0) {
      state.params.sigma2(i) = gamma_sample(0.5, 0.5 / problem.prior.vsigma, state.rng);
      continue;
    }
    double ss = 0.0;
    double prev = state.params.h0(i);
    for (int t = 0; t < T; ++t) {
      const double dlt = state.latents.logh(t, i) - prev;
      ss += dlt * dlt;
      prev = state.latents.logh(t, i);
    }
    const double shape = 0.5 * T;
    const double rate = std::max(0.5 * ss, problem.options.sigma2_rate_floor);
    const double proposal = invgamma_sample(shape, rate, state.rng);
    double log_ratio = std::numeric_limits<double>::infinity();
    if (current > 0.0) {
      log_ratio = 0.5 * (std::log(proposal) - std::log(current)) +
                  (current - proposal) / (2.0 * problem.prior.vsigma);
    }
    double prob = 1.0;
    if (metropolis_accept(log_ratio, state.rng, prob)) state.params.sigma2(i) = proposal;
    state.acceptance.sigma2.record(prob);
  }
}

double nu_log_conditional(double nu, const Eigen::VectorXd& xi_column, const PriorSpec& prior) {
  if (!(nu > 2.0)) return kNegInf;
  const double half = 0.5 * nu;
  const double n = static_cast<double>(xi_column.size());
  const double sum_log = xi_column.array().log().sum();
  const double sum_inv = xi_column.array().inverse().sum();
  return gamma_logpdf(nu, prior.nu_shape, prior.nu_rate) +
         n * (half * std::log(half) - std::lgamma(half)) - (half + 1.0) * sum_log -
         half * sum_inv;
}

void draw_nu(ChainState& state, const Problem& problem) {
  const ModelSpec& spec = problem.spec;
  if (!has_mixing(spec.family)) return;
  MhTuning& tune = state.tuning;
  for (int g = 0; g < spec.n_nu(); ++g) {
    const Eigen::VectorXd col = state.latents.xi.col(g);
    const double current = state.params.nu(g);
    const double proposal = current + std::exp(tune.log_step_nu(g)) * std_normal(state.rng);
    double log_ratio = kNegInf;  // proposals at or below 2 are rejected
    if (proposal > 2.0) {
      log_ratio = nu_log_conditional(proposal, col, problem.prior) -
                  nu_log_conditional(current, col, problem.prior);
    }
    double prob = 0.0;
    if (metropolis_accept(log_ratio, state.rng, prob)) state.params.nu(g) = proposal;
    state.acceptance.nu.record(prob);
    if (state.adapting) tune.window_accept(g) += prob;
  }
  if (state.adapting) {
    robbins_monro(tune.log_step_nu, tune.window_accept, tune.window_count, tune.n_adaptations,
                  tune);
  }
}

void draw_nu_rank(ChainState& state, const Problem& problem) {
  const ModelSpec& spec = problem.spec;
  if (!has_mixing(spec.family)) return;
  const int T = problem.design.T();
  const Eigen::MatrixXd A = current_A(state, problem);
  const Eigen::MatrixXd U = current_residuals(state, problem);
  const auto& gamma = state.params.gamma;
  auto& xi = state.latents.xi;
  MhTuning& tune = state.tuning;

  auto row_loglik = [&](const Eigen::MatrixXd& x, int t) {
    const Eigen::VectorXd w = expand_xi(spec, x, t);
    const Eigen::VectorXd e = structural_shocks(spec, A, gamma, w, U.row(t).transpose());
    double ll = 0.0;
    for (int i = 0; i < spec.k; ++i) {
      ll += -0.5 * std::log(w(i)) - 0.5 * e(i) * e(i) * std::exp(-state.latents.logh(t, i));
    }
    return ll;
  };

  for (int g = 0; g < spec.n_nu(); ++g) {
    const double current = state.params.nu(g);
    const double proposal = current + std::exp(tune.log_step_nu_rank(g)) * std_normal(state.rng);
    double prob = 0.0;
    if (proposal > 2.0) {
      Eigen::MatrixXd moved = xi;
      bool ok = true;
      double log_ratio = gamma_logpdf(proposal, problem.prior.nu_shape, problem.prior.nu_rate) -
                         gamma_logpdf(current, problem.prior.nu_shape, problem.prior.nu_rate);
      try {
        for (int t = 0; t < T && ok; ++t) {
          // nu/(2 xi) ~ Gamma(nu/2, 1); carry its lower or upper tail probability
          const double z = 0.5 * current / xi(t, g);
          const double lower = boost::math::gamma_p(0.5 * current, z);
          const double z_new = lower < 0.5
                                   ? boost::math::gamma_p_inv(0.5 * proposal, lower)
                                   : boost::math::gamma_q_inv(0.5 * proposal,
                                                              boost::math::gamma_q(0.5 * current, z));
          moved(t, g) = 0.5 * proposal / z_new;
          ok = std::isfinite(moved(t, g)) && moved(t, g) > 0.0;
          if (ok) log_ratio += row_loglik(moved, t) - row_loglik(xi, t);
        }
      } catch (const std::exception&) {
        ok = false;
      }
      if (ok && metropolis_accept(log_ratio, state.rng, prob)) {
        state.params.nu(g) = proposal;
        xi.col(g) = moved.col(g);
      }
    }
    state.acceptance.nu_rank.record(prob);
    if (state.adapting) tune.window_accept_rank(g) += prob;
  }
  if (state.adapting) {
    robbins_monro(tune.log_step_nu_rank, tune.window_accept_rank, tune.window_count_rank,
                  tune.n_adaptations_rank, tune);
  }
}

void draw_xi(ChainState& state, const Problem& problem) {
  const ModelSpec& spec = problem.spec;
  if (!has_mixing(spec.family)) return;
  const int k = spec.k;
  const int T = problem.design.T();
  const double c = state.tuning.c_xi;
  const auto& nu = state.params.nu;
  const auto& gamma = state.params.gamma;
  const Eigen::MatrixXd A = current_A(state, problem);
  const Eigen::MatrixXd U = current_residuals(state, problem);
  auto& xi = state.latents.xi;
  Rng& rng = state.rng;

  for (int t = 0; t < T; ++t) {
    const Eigen::VectorXd u = U.row(t).transpose();
    const Eigen::VectorXd logh = state.latents.logh.row(t).transpose();
    const Eigen::VectorXd e0 = A.triangularView<Eigen::UnitLower>() * u;

    if (orthogonal_mixing(spec.family)) {
      for (int i = 0; i < k; ++i) {
        const double h = std::exp(logh(i));
        const double cur = xi(t, i);
        double mode = 0.0, scale = 0.0;
        const bool use_t4 = spec.family == Family::OST &&
                            orthogonal_log_mode(e0(i), gamma(i), h, nu(i), mode, scale);
        double prop, log_ratio;
        if (use_t4) {
          const double chi2 = gamma_sample(2.0, 0.5, rng);
          const double z = mode + scale * std_normal(rng) / std::sqrt(chi2 / 4.0);
          prop = std::exp(z);
          const double zc = std::log(cur);
          log_ratio = orthogonal_log_target(prop, e0(i), gamma(i), h, nu(i)) + z -
                      orthogonal_log_target(cur, e0(i), gamma(i), h, nu(i)) - zc +
                      t4_logpdf(zc, mode, scale) - t4_logpdf(z, mode, scale);
        } else {
          const double alpha = 0.5 * c * (nu(i) + 1.0);
          const double beta = 0.5 * c * (nu(i) + e0(i) * e0(i) / h);
          prop = invgamma_sample(alpha, beta, rng);
          log_ratio = orthogonal_log_target(prop, e0(i), gamma(i), h, nu(i)) -
                      orthogonal_log_target(cur, e0(i), gamma(i), h, nu(i)) +
                      invgamma_logpdf(cur, alpha, beta) - invgamma_logpdf(prop, alpha, beta);
        }
        double prob = 0.0;
        if (prop > 0.0 && std::isfinite(prop) && metropolis_accept(log_ratio, rng, prob)) {
          xi(t, i) = prop;
        }
        state.acceptance.xi.record(prob);
      }
      continue;
    }

    const Eigen::VectorXd cur = expand_xi(spec, xi, t);
    Eigen::VectorXd prop(k);
    double log_q_cur = 0.0, log_q_prop = 0.0;
    const Eigen::VectorXd stat = mixing_proposal_stat(spec, A, u, logh);
    if (shared_mixing(spec.family)) {
      const double alpha = 0.5 * c * (nu(0) + k);
      const double beta = 0.5 * c * (nu(0) + stat(0));
      prop.setConstant(invgamma_sample(alpha, beta, rng));
      log_q_cur = invgamma_logpdf(cur(0), alpha, beta);
      log_q_prop = invgamma_logpdf(prop(0), alpha, beta);
    } else {
      for (int i = 0; i < k; ++i) {
        const double alpha = 0.5 * c * (nu(i) + 1.0);
        const double beta = 0.5 * c * (nu(i) + stat(i));
        prop(i) = invgamma_sample(alpha, beta, rng);
        log_q_cur += invgamma_logpdf(cur(i), alpha, beta);
        log_q_prop += invgamma_logpdf(prop(i), alpha, beta);
      }
    }
    const double log_ratio = mixing_log_target(spec, A, gamma, nu, prop, u, logh) -
                             mixing_log_target(spec, A, gamma, nu, cur, u, logh) + log_q_cur -
                             log_q_prop;
    double prob = 0.0;
    if (prop.allFinite() && (prop.array() > 0.0).all() &&
        metropolis_accept(log_ratio, rng, prob)) {
      if (shared_mixing(spec.family)) {
        xi(t, 0) = prop(0);
      } else {
        xi.row(t) = prop.transpose();
      }
    }
    state.acceptance.xi.record(prob);
  }
}

void gibbs_sweep(ChainState& state, const Problem& problem) {
  if (problem.options.joint_b_gamma) {
    draw_B_gamma(state, problem);
  } else {
    draw_B(state, problem);
    draw_gamma(state, problem);
  }
  draw_A(state, problem);
  draw_h(state, problem);
  draw_sigma2(state, problem);
  draw_nu(state, problem);
  if (problem.options.rank_nu_move) draw_nu_rank(state, problem);
  draw_xi(state, problem);
  ++state.sweep;
}

}  // namespace skewvar
