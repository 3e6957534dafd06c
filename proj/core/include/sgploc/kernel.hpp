#pragma once

#include <Eigen/Core>

namespace sgploc {

// Rational Quadratic kernel parameters plus the observation-noise and
// diagonal-stabilizer terms shared by the exact and sparse models.
struct KernelConfig {
  double alpha = 2.0;         // scale-mixture parameter
  double length_scale = 10.0; // dBm-space length scale
  double noise_var = 1.0;     // sigma^2 of the observation noise
  double jitter = 1e-8;       // diagonal stabilizer for factorizations

  void validate() const;
};

// k(xi, xj) = (1 + ||xi - xj||^2 / (2 alpha l^2))^(-alpha), in (0, 1].
double ratquad(const Eigen::Ref<const Eigen::VectorXd>& xi,
               const Eigen::Ref<const Eigen::VectorXd>& xj,
               const KernelConfig& cfg);

// Cross-covariance matrix: entry (i,j) = ratquad(A.row(i), B.row(j)).
Eigen::MatrixXd gram(const Eigen::Ref<const Eigen::MatrixXd>& a,
                     const Eigen::Ref<const Eigen::MatrixXd>& b,
                     const KernelConfig& cfg);

// gram(a, a) computed on the lower triangle and mirrored, so the result is
// exactly symmetric with a unit diagonal.
Eigen::MatrixXd gram_symmetric(const Eigen::Ref<const Eigen::MatrixXd>& a,
                               const KernelConfig& cfg);

}  // namespace sgploc
