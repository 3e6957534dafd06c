#pragma once

#include "sgploc/kernel.hpp"

#include <Eigen/Core>

namespace sgploc {

struct Prediction {
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
};

// Exact GP regression state. chol is the lower Cholesky factor of
// K_XX + (noise_var + jitter_used) I and weights solves that system
// against the targets. O(N^3) fit, O(N^2) per-point variance.
struct GpModel {
  Eigen::MatrixXd train_inputs;
  Eigen::VectorXd train_targets;
  Eigen::MatrixXd chol;
  Eigen::VectorXd weights;
  KernelConfig cfg;
  double jitter_used = 0.0;
};

GpModel gp_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
               const KernelConfig& cfg);

// Predictive mean and variance of the latent function at each query row.
// include_noise adds the observation noise variance on top.
Prediction gp_predict(const GpModel& model, const Eigen::MatrixXd& x_star,
                      bool include_noise = false);

}  // namespace sgploc
