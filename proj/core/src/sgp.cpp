#include "sgploc/sgp.hpp"

#include "cholesky.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgploc {

SgpModel sgp_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                 const Eigen::MatrixXd& z, const KernelConfig& cfg) {
  cfg.validate();
  const Eigen::Index n = x.rows();
  const Eigen::Index m = z.rows();
  if (n < 1) throw std::invalid_argument("sgp_fit: need at least one row");
  if (x.rows() != y.size()) {
    throw std::invalid_argument("sgp_fit: X rows and y length disagree");
  }
  if (m < 1) throw std::invalid_argument("sgp_fit: need at least one inducing point");
  if (m > n) throw std::invalid_argument("sgp_fit: more inducing points than rows");
  if (z.cols() != x.cols()) {
    throw std::invalid_argument("sgp_fit: Z width differs from X width");
  }

  SgpModel model;
  model.inducing = z;
  model.cfg = cfg;
  model.n_train = n;

  auto kzz = detail::llt_with_escalation(gram_symmetric(z, cfg), cfg.jitter,
                                         "K_ZZ");
  model.kzz_chol = std::move(kzz.lower);
  model.jitter_used = kzz.jitter_used;

  const Eigen::MatrixXd k_zx = gram(z, x, cfg);
  // v = L^-1 K_ZX, so K_XZ K_ZZ^-1 K_ZX = v^T v. This solve is the O(N M^2)
  // term that dominates the fit.
  const Eigen::MatrixXd v =
      model.kzz_chol.triangularView<Eigen::Lower>().solve(k_zx);

  model.lambda.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double prior = ratquad(x.row(i), x.row(i), cfg);
    // Schur-complement diagonal; nonnegative in exact arithmetic.
    model.lambda(i) = std::max(0.0, prior - v.col(i).squaredNorm());
  }

  const double gamma_floor = std::max(cfg.jitter, 1e-12);
  const Eigen::ArrayXd gamma =
      (model.lambda.array() + cfg.noise_var).max(gamma_floor);

  // Q_ZZ = L (I + v Gamma^-1 v^T) L^T = (L Lb)(L Lb)^T with Lb = chol(B).
  const Eigen::MatrixXd v_scaled =
      v.array().rowwise() * gamma.inverse().transpose();
  Eigen::MatrixXd b = v_scaled * v.transpose();
  b = 0.5 * (b + b.transpose());  // symmetrize GEMM round-off
  b.diagonal().array() += 1.0;
  auto b_chol = detail::llt_with_escalation(b, 0.0, "I + V Gamma^-1 V^T");
  model.qzz_chol = model.kzz_chol * b_chol.lower;

  const Eigen::VectorXd rhs = k_zx * (y.array() / gamma).matrix();
  Eigen::VectorXd tmp = model.qzz_chol.triangularView<Eigen::Lower>().solve(rhs);
  model.pred_weights =
      model.qzz_chol.transpose().triangularView<Eigen::Upper>().solve(tmp);
  return model;
}

Prediction sgp_predict(const SgpModel& model, const Eigen::MatrixXd& x_star,
                       bool include_noise) {
  if (x_star.cols() != model.inducing.cols()) {
    throw std::invalid_argument("sgp_predict: query width differs from model width");
  }
  const Eigen::MatrixXd k_star = gram(x_star, model.inducing, model.cfg);

  Prediction out;
  out.mean = k_star * model.pred_weights;

  const Eigen::MatrixXd a1 =
      model.kzz_chol.triangularView<Eigen::Lower>().solve(k_star.transpose());
  const Eigen::MatrixXd a2 =
      model.qzz_chol.triangularView<Eigen::Lower>().solve(k_star.transpose());
  out.var.resize(x_star.rows());
  for (Eigen::Index i = 0; i < x_star.rows(); ++i) {
    const double prior = ratquad(x_star.row(i), x_star.row(i), model.cfg);
    double var = prior - a1.col(i).squaredNorm() + a2.col(i).squaredNorm();
    if (include_noise) var += model.cfg.noise_var;
    out.var(i) = var > 0.0 ? var : 1e-12;
  }
  return out;
}

double sparsity(const SgpModel& model) {
  return 100.0 * static_cast<double>(model.inducing.rows()) /
         static_cast<double>(model.n_train);
}

}  // namespace sgploc
