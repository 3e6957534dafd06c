#include "sgploc/gp.hpp"

#include "cholesky.hpp"

#include <stdexcept>

namespace sgploc {

GpModel gp_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
               const KernelConfig& cfg) {
  cfg.validate();
  if (x.rows() < 1) throw std::invalid_argument("gp_fit: need at least one row");
  if (x.rows() != y.size()) {
    throw std::invalid_argument("gp_fit: X rows and y length disagree");
  }

  Eigen::MatrixXd k = gram_symmetric(x, cfg);
  k.diagonal().array() += cfg.noise_var;
  auto chol = detail::llt_with_escalation(k, cfg.jitter, "K_XX + noise I");

  GpModel model;
  model.train_inputs = x;
  model.train_targets = y;
  model.chol = std::move(chol.lower);
  model.jitter_used = chol.jitter_used;
  model.cfg = cfg;
  // weights = (K + noise I + jitter I)^-1 y via two triangular solves.
  Eigen::VectorXd tmp = model.chol.triangularView<Eigen::Lower>().solve(y);
  model.weights =
      model.chol.transpose().triangularView<Eigen::Upper>().solve(tmp);
  return model;
}

Prediction gp_predict(const GpModel& model, const Eigen::MatrixXd& x_star,
                      bool include_noise) {
  if (x_star.cols() != model.train_inputs.cols()) {
    throw std::invalid_argument("gp_predict: query width differs from training width");
  }
  const Eigen::MatrixXd k_star = gram(x_star, model.train_inputs, model.cfg);

  Prediction out;
  out.mean = k_star * model.weights;

  // var_i = k(x*,x*) - || L^-1 k_*i ||^2
  const Eigen::MatrixXd v =
      model.chol.triangularView<Eigen::Lower>().solve(k_star.transpose());
  out.var.resize(x_star.rows());
  for (Eigen::Index i = 0; i < x_star.rows(); ++i) {
    const double prior = ratquad(x_star.row(i), x_star.row(i), model.cfg);
    double var = prior - v.col(i).squaredNorm();
    if (include_noise) var += model.cfg.noise_var;
    out.var(i) = var > 0.0 ? var : 1e-12;
  }
  return out;
}

}  // namespace sgploc
