#pragma once

#include "sgploc/gp.hpp"
#include "sgploc/kernel.hpp"

#include <Eigen/Core>

namespace sgploc {

// Sparse GP in FITC form over M inducing points Z. Only M-sized factors are
// kept after the fit:
//
//   Q_ZZ    = K_ZZ + K_ZX (Lambda + noise I)^-1 K_XZ
//   lambda_i = k(x_i,x_i) - [K_XZ K_ZZ^-1 K_ZX]_ii        (clamped at 0)
//   mean(*) = K_*Z Q_ZZ^-1 K_ZX (Lambda + noise I)^-1 y = K_*Z pred_weights
//   var(*)  = k(*,*) - K_*Z (K_ZZ^-1 - Q_ZZ^-1) K_Z*
//
// With Z = X this collapses to the exact GP posterior, which is the
// correctness anchor the tests lean on. Fit cost is O(N M^2).
struct SgpModel {
  Eigen::MatrixXd inducing;      // Z, M x W
  Eigen::MatrixXd kzz_chol;      // lower factor of K_ZZ + jitter I
  Eigen::MatrixXd qzz_chol;      // lower factor of Q_ZZ
  Eigen::VectorXd lambda;        // N diagonal corrections
  Eigen::VectorXd pred_weights;  // M
  KernelConfig cfg;
  Eigen::Index n_train = 0;
  double jitter_used = 0.0;
};

SgpModel sgp_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                 const Eigen::MatrixXd& z, const KernelConfig& cfg);

Prediction sgp_predict(const SgpModel& model, const Eigen::MatrixXd& x_star,
                       bool include_noise = false);

// 100 * M / N.
double sparsity(const SgpModel& model);

}  // namespace sgploc
