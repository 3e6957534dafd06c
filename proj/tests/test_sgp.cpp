#include <sgploc/gp.hpp>
#include <sgploc/rng.hpp>
#include <sgploc/sgp.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "support/test_util.hpp"

namespace sgploc {
namespace {

using testing::random_matrix;
using testing::random_vector;

TEST(SgpFit, CollapsesToExactGpWhenZEqualsX) {
  KernelConfig cfg;
  Rng rng(101);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd x = random_matrix(60, 6, rng);
    const Eigen::VectorXd y = random_vector(60, rng);
    const Eigen::MatrixXd q = random_matrix(8, 6, rng);
    const Prediction sparse = sgp_predict(sgp_fit(x, y, x, cfg), q);
    const Prediction exact = gp_predict(gp_fit(x, y, cfg), q);
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
      EXPECT_NEAR(sparse.mean(i), exact.mean(i),
                  1e-6 * (1.0 + std::abs(exact.mean(i))));
      EXPECT_NEAR(sparse.var(i), exact.var(i),
                  1e-6 * (1.0 + std::abs(exact.var(i))));
    }
  }
}

TEST(SgpFit, SingleInducingPointClosedForm) {
  // Constant targets, one inducing point at the centroid. Scalar algebra:
  //   lambda_i = 1 - k_i^2 / kzz,  gamma_i = lambda_i + noise
  //   qzz = kzz + sum k_i^2 / gamma_i
  //   mean(q) = k(q,z) * (sum k_i y_i / gamma_i) / qzz
  KernelConfig cfg;
  Rng rng(103);
  const Eigen::MatrixXd x = random_matrix(20, 3, rng);
  const double c = 12.5;
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(20, c);
  Eigen::MatrixXd z(1, 3);
  z.row(0) = x.colwise().mean();

  const SgpModel model = sgp_fit(x, y, z, cfg);
  const Eigen::MatrixXd q = random_matrix(4, 3, rng);
  const Prediction got = sgp_predict(model, q);

  const double kzz = 1.0 + cfg.jitter;
  double qzz = kzz;
  double wsum = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double ki = ratquad(z.row(0), x.row(i), cfg);
    const double lambda = std::max(0.0, 1.0 - ki * ki / kzz);
    const double gamma = lambda + cfg.noise_var;
    qzz += ki * ki / gamma;
    wsum += ki * c / gamma;
  }
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    const double want = ratquad(q.row(i), z.row(0), cfg) * wsum / qzz;
    EXPECT_NEAR(got.mean(i), want, 1e-8 * (1.0 + std::abs(want)));
    EXPECT_LT(std::abs(got.mean(i)), std::abs(c));  // shrinkage toward the prior
  }
}

TEST(SgpFit, LambdaNonnegative) {
  KernelConfig cfg;
  Rng rng(107);
  const Eigen::MatrixXd x = random_matrix(200, 8, rng);
  const Eigen::VectorXd y = random_vector(200, rng);
  Eigen::MatrixXd z = x.topRows(50);
  const SgpModel model = sgp_fit(x, y, z, cfg);
  EXPECT_EQ(model.lambda.size(), 200);
  for (Eigen::Index i = 0; i < model.lambda.size(); ++i) {
    EXPECT_GE(model.lambda(i), 0.0);
  }
}

TEST(SgpFit, QzzReconstruction) {
  KernelConfig cfg;
  Rng rng(109);
  const Eigen::MatrixXd x = random_matrix(80, 5, rng);
  const Eigen::VectorXd y = random_vector(80, rng);
  const Eigen::MatrixXd z = x.topRows(25);
  const SgpModel model = sgp_fit(x, y, z, cfg);

  Eigen::MatrixXd kzz = gram_symmetric(z, cfg);
  kzz.diagonal().array() += model.jitter_used;
  const Eigen::MatrixXd kzx = gram(z, x, cfg);
  const Eigen::ArrayXd gamma = model.lambda.array() + cfg.noise_var;
  const Eigen::MatrixXd qzz =
      kzz + kzx * gamma.inverse().matrix().asDiagonal() * kzx.transpose();
  const Eigen::MatrixXd recon = model.qzz_chol * model.qzz_chol.transpose();
  EXPECT_LT((recon - qzz).norm() / qzz.norm(), 1e-6);
}

TEST(SgpPredict, PriorReversionFarFromInducing) {
  KernelConfig cfg;
  Rng rng(113);
  const Eigen::MatrixXd x = random_matrix(40, 3, rng);
  const Eigen::VectorXd y = random_vector(40, rng);
  const SgpModel model = sgp_fit(x, y, x.topRows(10), cfg);
  Eigen::MatrixXd far(1, 3);
  far.setConstant(1e5);
  const Prediction pred = sgp_predict(model, far);
  EXPECT_NEAR(pred.mean(0), 0.0, 1e-3);
  EXPECT_NEAR(pred.var(0), 1.0, 1e-3);
  EXPECT_GT(pred.var(0), 0.0);
}

TEST(SgpPredict, PermutationInvariant) {
  KernelConfig cfg;
  Rng rng(127);
  const Eigen::MatrixXd x = random_matrix(50, 4, rng);
  const Eigen::VectorXd y = random_vector(50, rng);
  const Eigen::MatrixXd z = x.topRows(12);
  const Eigen::MatrixXd q = random_matrix(6, 4, rng);

  std::vector<Eigen::Index> perm(50);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  Eigen::MatrixXd xp(50, 4);
  Eigen::VectorXd yp(50);
  for (Eigen::Index i = 0; i < 50; ++i) {
    xp.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
    yp(i) = y(perm[static_cast<std::size_t>(i)]);
  }

  const Prediction a = sgp_predict(sgp_fit(x, y, z, cfg), q);
  const Prediction b = sgp_predict(sgp_fit(xp, yp, z, cfg), q);
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    EXPECT_NEAR(a.mean(i), b.mean(i), 1e-10 * (1.0 + std::abs(a.mean(i))));
    EXPECT_NEAR(a.var(i), b.var(i), 1e-10);
  }
}

TEST(Sparsity, Arithmetic) {
  KernelConfig cfg;
  Rng rng(131);
  const Eigen::MatrixXd x = random_matrix(20, 3, rng);
  const Eigen::VectorXd y = random_vector(20, rng);
  EXPECT_DOUBLE_EQ(sparsity(sgp_fit(x, y, x, cfg)), 100.0);
  EXPECT_DOUBLE_EQ(sparsity(sgp_fit(x, y, x.topRows(10), cfg)), 50.0);
}

TEST(Sparsity, PaperScaleRatio) {
  // 933 of 1866 rows -> exactly 50%.
  SgpModel model;
  model.inducing.resize(933, 1);
  model.n_train = 1866;
  EXPECT_DOUBLE_EQ(sparsity(model), 50.0);
}

TEST(SgpFit, InputValidation) {
  KernelConfig cfg;
  Rng rng(137);
  const Eigen::MatrixXd x = random_matrix(10, 3, rng);
  const Eigen::VectorXd y = random_vector(10, rng);
  EXPECT_THROW(sgp_fit(x, y, random_matrix(11, 3, rng), cfg), std::invalid_argument);
  EXPECT_THROW(sgp_fit(x, y, random_matrix(5, 4, rng), cfg), std::invalid_argument);
  EXPECT_THROW(sgp_fit(x, y, Eigen::MatrixXd(0, 3), cfg), std::invalid_argument);
  const SgpModel model = sgp_fit(x, y, x.topRows(4), cfg);
  EXPECT_THROW(sgp_predict(model, Eigen::MatrixXd::Zero(1, 5)), std::invalid_argument);
}

}  // namespace
}  // namespace sgploc
