#pragma once

#include <array>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace skewvar {

/// Error distribution of the VAR disturbances.
enum class Family { Gaussian, StudentT, SkewT, OT, MT, OST, MST };

inline constexpr std::array<Family, 7> kAllFamilies{
    Family::Gaussian, Family::StudentT, Family::SkewT, Family::OT,
    Family::MT,       Family::OST,      Family::MST};

constexpr bool has_mixing(Family f) { return f != Family::Gaussian; }
constexpr bool has_skew(Family f) {
  return f == Family::SkewT || f == Family::OST || f == Family::MST;
}
/// One mixing variable per period shared by every equation.
constexpr bool shared_mixing(Family f) {
  return f == Family::StudentT || f == Family::SkewT;
}
/// Mixing acts on the orthogonalized shocks A u_t rather than on u_t.
constexpr bool orthogonal_mixing(Family f) {
  return f == Family::OT || f == Family::OST;
}

std::string_view family_name(Family f);
/// Accepts the display names ("Student-t", "MST", ...) case-insensitively.
Family parse_family(std::string_view name);

struct ModelSpec {
  Family family = Family::Gaussian;
  bool sv = false;
  int p = 1;
  int k = 1;

  int n_coef() const { return 1 + k * p; }
  int n_a() const { return k * (k - 1) / 2; }
  int n_nu() const;
  /// Columns of the mixing-variable matrix (1 for shared families).
  int n_xi_cols() const { return shared_mixing(family) ? 1 : k; }
  /// Table label such as "MST-SV" or "Gaussian".
  std::string label() const;
  void validate() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Prior hyperparameters. Coefficient moments follow vec(B) in column-major
/// order, i.e. B(i, j) sits at index j * k + i.
struct PriorSpec {
  Eigen::VectorXd b0;
  Eigen::VectorXd vb0;
  double l1 = 0.2;
  double l2 = 0.5;
  double va = 10.0;
  double nu_shape = 2.0;
  double nu_rate = 0.1;
  double vgamma = 1.0;
  double vsigma = 1.0;
  Eigen::VectorXd h0_mean;
  double h0_var = 4.0;

  void validate(const ModelSpec& spec) const;
};

/// Static parameters of one posterior draw.
struct ParameterDraw {
  Eigen::MatrixXd B;       // k x (1 + kp): intercept, then lag blocks
  Eigen::VectorXd a;       // strict lower triangle of A, row by row
  Eigen::VectorXd gamma;   // k; identically zero for symmetric families
  Eigen::VectorXd nu;      // n_nu() entries
  Eigen::VectorXd sigma2;  // k; identically zero without SV
  Eigen::VectorXd h0;      // initial log-volatilities

  void validate(const ModelSpec& spec) const;
};

bool operator==(const ParameterDraw& lhs, const ParameterDraw& rhs);

/// Latent states, one row per modeled period.
struct LatentPaths {
  Eigen::MatrixXd xi;    // T x n_xi_cols(); ones for the Gaussian family
  Eigen::MatrixXd logh;  // T x k
};

bool operator==(const LatentPaths& lhs, const LatentPaths& rhs);

Eigen::MatrixXd unit_lower_triangular(const Eigen::VectorXd& a, int k);
Eigen::VectorXd strict_lower_elements(const Eigen::MatrixXd& A);

/// Number of free parameters, used for table output and sanity checks.
int parameter_count(const ModelSpec& spec);

}  // namespace skewvar
