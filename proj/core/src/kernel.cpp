#include "sgploc/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace sgploc {

void KernelConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("KernelConfig: alpha must be > 0");
  if (!(length_scale > 0.0)) {
    throw std::invalid_argument("KernelConfig: length_scale must be > 0");
  }
  if (!(noise_var >= 0.0)) {
    throw std::invalid_argument("KernelConfig: noise_var must be >= 0");
  }
  if (!(jitter >= 0.0)) throw std::invalid_argument("KernelConfig: jitter must be >= 0");
}

namespace {

inline double ratquad_from_sqdist(double d2, const KernelConfig& cfg) {
  const double denom = 2.0 * cfg.alpha * cfg.length_scale * cfg.length_scale;
  return std::pow(1.0 + d2 / denom, -cfg.alpha);
}

}  // namespace

double ratquad(const Eigen::Ref<const Eigen::VectorXd>& xi,
               const Eigen::Ref<const Eigen::VectorXd>& xj,
               const KernelConfig& cfg) {
  if (xi.size() != xj.size()) {
    throw std::invalid_argument("ratquad: input vectors have different lengths");
  }
  return ratquad_from_sqdist((xi - xj).squaredNorm(), cfg);
}

Eigen::MatrixXd gram(const Eigen::Ref<const Eigen::MatrixXd>& a,
                     const Eigen::Ref<const Eigen::MatrixXd>& b,
                     const KernelConfig& cfg) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("gram: inputs have different widths");
  }
  Eigen::MatrixXd k(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      k(i, j) = ratquad_from_sqdist((a.row(i) - b.row(j)).squaredNorm(), cfg);
    }
  }
  return k;
}

Eigen::MatrixXd gram_symmetric(const Eigen::Ref<const Eigen::MatrixXd>& a,
                               const KernelConfig& cfg) {
  Eigen::MatrixXd k(a.rows(), a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = ratquad_from_sqdist((a.row(i) - a.row(j)).squaredNorm(), cfg);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

}  // namespace sgploc
