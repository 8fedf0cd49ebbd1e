#include "skewvar/model.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <iostream>
#include <mutex>

#include "skewvar/errors.hpp"

namespace skewvar {

namespace {
std::atomic<bool> g_quiet{false};
std::mutex g_warn_mutex;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool same_shape_equal(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  return x.rows() == y.rows() && x.cols() == y.cols() && (x.array() == y.array()).all();
}
}  // namespace

void warn(const std::string& message) {
  if (g_quiet.load()) return;
  std::lock_guard lock(g_warn_mutex);
  std::cerr << "warning: " << message << '\n';
}

void set_quiet(bool quiet) { g_quiet.store(quiet); }

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Gaussian: return "Gaussian";
    case Family::StudentT: return "Student-t";
    case Family::SkewT: return "Skew-t";
    case Family::OT: return "OT";
    case Family::MT: return "MT";
    case Family::OST: return "OST";
    case Family::MST: return "MST";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  const std::string key = lower(name);
  for (Family f : kAllFamilies) {
    if (lower(family_name(f)) == key) return f;
  }
  if (key == "gauss" || key == "normal") return Family::Gaussian;
  if (key == "studentt" || key == "student") return Family::StudentT;
  if (key == "skewt" || key == "skew") return Family::SkewT;
  throw ConfigError("unknown error family '" + std::string(name) + "'");
}

int ModelSpec::n_nu() const {
  if (!has_mixing(family)) return 0;
  return shared_mixing(family) ? 1 : k;
}

std::string ModelSpec::label() const {
  std::string out(family_name(family));
  if (sv) out += "-SV";
  return out;
}

void ModelSpec::validate() const {
  if (k < 1) throw ConfigError("model dimension k must be >= 1");
  if (p < 0) throw ConfigError("lag order p must be >= 0");
}

void PriorSpec::validate(const ModelSpec& spec) const {
  const Eigen::Index n = static_cast<Eigen::Index>(spec.k) * spec.n_coef();
  if (b0.size() != n || vb0.size() != n) {
    throw ConfigError("prior coefficient moments must have k(1+kp) entries");
  }
  if (h0_mean.size() != spec.k) throw ConfigError("h0_mean must have k entries");
  if ((vb0.array() <= 0.0).any() || !vb0.allFinite()) {
    throw ConfigError("prior coefficient variances must be positive");
  }
  if (!(va > 0 && nu_shape > 0 && nu_rate > 0 && vgamma > 0 && vsigma > 0 && h0_var > 0)) {
    throw ConfigError("prior variances and Gamma parameters must be positive");
  }
}

void ParameterDraw::validate(const ModelSpec& spec) const {
  if (B.rows() != spec.k || B.cols() != spec.n_coef()) throw ConfigError("B has wrong shape");
  if (a.size() != spec.n_a()) throw ConfigError("a has wrong length");
  if (gamma.size() != spec.k) throw ConfigError("gamma has wrong length");
  if (nu.size() != spec.n_nu()) throw ConfigError("nu has wrong length");
  if (sigma2.size() != spec.k || h0.size() != spec.k) {
    throw ConfigError("sigma2/h0 have wrong length");
  }
  if (!has_skew(spec.family) && (gamma.array() != 0.0).any()) {
    throw ConfigError("symmetric family requires gamma = 0");
  }
  if ((nu.array() <= 2.0).any()) throw ConfigError("degrees of freedom must exceed 2");
  if ((sigma2.array() < 0.0).any()) throw ConfigError("sigma2 must be non-negative");
  if (!spec.sv && (sigma2.array() != 0.0).any()) {
    throw ConfigError("sigma2 must be zero without stochastic volatility");
  }
}

bool operator==(const ParameterDraw& lhs, const ParameterDraw& rhs) {
  return same_shape_equal(lhs.B, rhs.B) && same_shape_equal(lhs.a, rhs.a) &&
         same_shape_equal(lhs.gamma, rhs.gamma) && same_shape_equal(lhs.nu, rhs.nu) &&
         same_shape_equal(lhs.sigma2, rhs.sigma2) && same_shape_equal(lhs.h0, rhs.h0);
}

bool operator==(const LatentPaths& lhs, const LatentPaths& rhs) {
  return same_shape_equal(lhs.xi, rhs.xi) && same_shape_equal(lhs.logh, rhs.logh);
}

Eigen::MatrixXd unit_lower_triangular(const Eigen::VectorXd& a, int k) {
  if (a.size() != k * (k - 1) / 2) throw ConfigError("a has wrong length for k");
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(k, k);
  int idx = 0;
  for (int i = 1; i < k; ++i) {
    for (int j = 0; j < i; ++j) A(i, j) = a(idx++);
  }
  return A;
}

Eigen::VectorXd strict_lower_elements(const Eigen::MatrixXd& A) {
  const int k = static_cast<int>(A.rows());
  Eigen::VectorXd a(k * (k - 1) / 2);
  int idx = 0;
  for (int i = 1; i < k; ++i) {
    for (int j = 0; j < i; ++j) a(idx++) = A(i, j);
  }
  return a;
}

int parameter_count(const ModelSpec& spec) {
  int n = spec.k * spec.n_coef() + spec.n_a() + spec.k + spec.n_nu();
  if (has_skew(spec.family)) n += spec.k;
  if (spec.sv) n += spec.k;
  return n;
}

}  // namespace skewvar
