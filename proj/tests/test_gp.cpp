#include <sgploc/gp.hpp>
#include <sgploc/rng.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "support/oracles.hpp"
#include "support/test_util.hpp"

namespace sgploc {
namespace {

using testing::dense_gp_oracle;
using testing::random_matrix;
using testing::random_vector;

TEST(GpFit, SinglePointClosedForm) {
  // k(x,x)=1, noise 1: (1 + 1) w = 2 -> w = 1, mean at x = k * w = 1.
  KernelConfig cfg;
  Eigen::MatrixXd x(1, 2);
  x << -50.0, -60.0;
  Eigen::VectorXd y(1);
  y << 2.0;
  const GpModel model = gp_fit(x, y, cfg);
  EXPECT_NEAR(model.weights(0), 1.0, 1e-6);
  const Prediction pred = gp_predict(model, x);
  EXPECT_NEAR(pred.mean(0), 1.0, 1e-6);
}

TEST(GpFit, DuplicateRowsSucceed) {
  KernelConfig cfg;
  Rng rng(3);
  Eigen::MatrixXd x = random_matrix(10, 4, rng);
  x.row(7) = x.row(1);
  x.row(8) = x.row(1);
  const Eigen::VectorXd y = random_vector(10, rng);
  EXPECT_NO_THROW(gp_fit(x, y, cfg));
}

TEST(GpFit, JitterEscalationOnSingularMatrix) {
  // noise 0, jitter 0 and exact duplicate rows make K singular, so the fit
  // only succeeds through escalation.
  KernelConfig cfg;
  cfg.noise_var = 0.0;
  cfg.jitter = 0.0;
  Eigen::MatrixXd x(2, 1);
  x << -50.0, -50.0;
  Eigen::VectorXd y(2);
  y << 1.0, 1.0;
  const GpModel model = gp_fit(x, y, cfg);
  EXPECT_GT(model.jitter_used, 0.0);
  EXPECT_LE(model.jitter_used, 1e-2);
}

TEST(GpFit, ReconstructionInvariant) {
  KernelConfig cfg;
  Rng rng(17);
  const Eigen::MatrixXd x = random_matrix(64, 6, rng);
  const Eigen::VectorXd y = random_vector(64, rng);
  const GpModel model = gp_fit(x, y, cfg);

  Eigen::MatrixXd k = gram_symmetric(x, cfg);
  k.diagonal().array() += cfg.noise_var + model.jitter_used;
  const Eigen::MatrixXd recon = model.chol * model.chol.transpose();
  EXPECT_LT((recon - k).norm() / k.norm(), 1e-6);

  const Eigen::VectorXd residual = k * model.weights - y;
  EXPECT_LT(residual.norm() / y.norm(), 1e-6);
}

TEST(GpPredict, MatchesDenseOracle) {
  KernelConfig cfg;
  Rng rng(23);
  const Eigen::MatrixXd x = random_matrix(50, 5, rng);
  const Eigen::VectorXd y = random_vector(50, rng);
  const Eigen::MatrixXd q = random_matrix(10, 5, rng);
  const GpModel model = gp_fit(x, y, cfg);
  const Prediction got = gp_predict(model, q);
  const Prediction want = dense_gp_oracle(x, y, q, cfg);
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    EXPECT_NEAR(got.mean(i), want.mean(i), 1e-8 * (1.0 + std::abs(want.mean(i))));
    EXPECT_NEAR(got.var(i), want.var(i), 1e-8 * (1.0 + std::abs(want.var(i))));
  }
}

TEST(GpPredict, PriorReversionFarFromData) {
  KernelConfig cfg;
  Rng rng(29);
  const Eigen::MatrixXd x = random_matrix(20, 3, rng);
  const Eigen::VectorXd y = random_vector(20, rng);
  const GpModel model = gp_fit(x, y, cfg);
  Eigen::MatrixXd far(1, 3);
  far << 1e5, 1e5, 1e5;
  const Prediction pred = gp_predict(model, far);
  EXPECT_NEAR(pred.mean(0), 0.0, 1e-3);
  EXPECT_NEAR(pred.var(0), 1.0, 1e-3);
}

TEST(GpPredict, VarianceBoundsAndContraction) {
  KernelConfig cfg;
  Rng rng(31);
  const Eigen::MatrixXd x = random_matrix(30, 4, rng);
  const Eigen::VectorXd y = random_vector(30, rng);
  const GpModel model = gp_fit(x, y, cfg);
  const Prediction at_train = gp_predict(model, x.topRows(1));
  Eigen::MatrixXd far(1, 4);
  far.setConstant(1e4);
  const Prediction at_far = gp_predict(model, far);
  EXPECT_GT(at_train.var(0), 0.0);
  EXPECT_LE(at_train.var(0), 1.0 + cfg.jitter);
  EXPECT_LT(at_train.var(0), at_far.var(0));
}

TEST(GpPredict, InterpolatesAsNoiseVanishes) {
  KernelConfig cfg;
  cfg.noise_var = 1e-10;
  cfg.jitter = 1e-12;
  Rng rng(37);
  const Eigen::MatrixXd x = random_matrix(15, 3, rng);
  const Eigen::VectorXd y = random_vector(15, rng);
  const GpModel model = gp_fit(x, y, cfg);
  const Prediction pred = gp_predict(model, x);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    EXPECT_NEAR(pred.mean(i), y(i), 1e-4);
  }
}

TEST(GpPredict, PermutationInvariant) {
  KernelConfig cfg;
  Rng rng(41);
  const Eigen::MatrixXd x = random_matrix(25, 4, rng);
  const Eigen::VectorXd y = random_vector(25, rng);
  const Eigen::MatrixXd q = random_matrix(5, 4, rng);

  std::vector<Eigen::Index> perm(25);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  Eigen::MatrixXd xp(25, 4);
  Eigen::VectorXd yp(25);
  for (Eigen::Index i = 0; i < 25; ++i) {
    xp.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
    yp(i) = y(perm[static_cast<std::size_t>(i)]);
  }

  const Prediction a = gp_predict(gp_fit(x, y, cfg), q);
  const Prediction b = gp_predict(gp_fit(xp, yp, cfg), q);
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    EXPECT_NEAR(a.mean(i), b.mean(i), 1e-10 * (1.0 + std::abs(a.mean(i))));
    EXPECT_NEAR(a.var(i), b.var(i), 1e-10);
  }
}

TEST(GpPredict, DimensionMismatchThrows) {
  KernelConfig cfg;
  Rng rng(43);
  const GpModel model = gp_fit(random_matrix(5, 3, rng), random_vector(5, rng), cfg);
  EXPECT_THROW(gp_predict(model, Eigen::MatrixXd::Zero(1, 4)), std::invalid_argument);
}

TEST(GpFit, InputValidation) {
  KernelConfig cfg;
  EXPECT_THROW(gp_fit(Eigen::MatrixXd::Zero(0, 3), Eigen::VectorXd::Zero(0), cfg),
               std::invalid_argument);
  EXPECT_THROW(gp_fit(Eigen::MatrixXd::Zero(3, 2), Eigen::VectorXd::Zero(4), cfg),
               std::invalid_argument);
}

TEST(DenseOracle, SingularWithoutStabilizerThrows) {
  KernelConfig cfg;
  cfg.noise_var = 0.0;
  cfg.jitter = 0.0;
  Eigen::MatrixXd x(2, 1);
  x << -40.0, -40.0;
  Eigen::VectorXd y(2);
  y << 1.0, 1.0;
  EXPECT_THROW(dense_gp_oracle(x, y, x, cfg), std::runtime_error);
}

}  // namespace
}  // namespace sgploc
