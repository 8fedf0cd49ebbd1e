#pragma once

#include <Eigen/Dense>

#include "skewvar/design.hpp"
#include "skewvar/model.hpp"

namespace skewvar {

// Per-period algebra of u_t = y_t - B x_t under each mixing structure.
//   multi/shared: u = W gamma + W^{1/2} A^{-1} H^{1/2} eps
//   orthogonal:   A u = W gamma + W^{1/2} H^{1/2} eps
//   Gaussian:     u = A^{-1} H^{1/2} eps
// `xi` below is always the k-vector diag(W_t); shared families repeat the
// single mixing value and the Gaussian family uses ones.

Eigen::MatrixXd residuals(const Design& design, const Eigen::MatrixXd& B);

Eigen::VectorXd expand_xi(const ModelSpec& spec, const Eigen::MatrixXd& xi, int t);

/// E[u_t | W_t].
Eigen::VectorXd skew_mean(const ModelSpec& spec, const Eigen::MatrixXd& A,
                          const Eigen::VectorXd& gamma, const Eigen::VectorXd& xi);

/// Shocks e_t with e_t | W_t, H_t ~ N(0, H_t).
Eigen::VectorXd structural_shocks(const ModelSpec& spec, const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& gamma,
                                  const Eigen::VectorXd& xi,
                                  const Eigen::VectorXd& u);

/// Q_t with Sigma_t^{-1} = Q_t' Q_t.
Eigen::MatrixXd precision_factor(const ModelSpec& spec, const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& xi,
                                 const Eigen::VectorXd& logh);

/// F_t with Sigma_t = F_t F_t'.
Eigen::MatrixXd covariance_factor(const ModelSpec& spec, const Eigen::MatrixXd& A_inv,
                                  const Eigen::VectorXd& xi,
                                  const Eigen::VectorXd& logh);

/// log N(u_t; E[u_t | W_t], Sigma_t).
double conditional_gaussian_logpdf(const ModelSpec& spec, const Eigen::MatrixXd& A,
                                   const Eigen::VectorXd& gamma,
                                   const Eigen::VectorXd& xi,
                                   const Eigen::VectorXd& logh,
                                   const Eigen::VectorXd& u);

/// Squared standardized residuals that scale the IG proposal for the mixing
/// variables, one per column of xi: e_i^2/h_i with e = A u (orthogonal),
/// u_i^2 (A' H^{-1} A)_ii (multi) and sum_i e_i^2/h_i (shared). None depend
/// on the current xi.
Eigen::VectorXd mixing_proposal_stat(const ModelSpec& spec, const Eigen::MatrixXd& A,
                                     const Eigen::VectorXd& u, const Eigen::VectorXd& logh);

}  // namespace skewvar
