#include <sgploc/kernel.hpp>
#include <sgploc/rng.hpp>

#include <Eigen/Cholesky>
#include <gtest/gtest.h>

#include "support/test_util.hpp"

namespace sgploc {
namespace {

using testing::random_matrix;

TEST(RatQuad, ZeroDistanceIsOne) {
  KernelConfig cfg;
  Eigen::VectorXd x(3);
  x << -50.0, -60.0, -70.0;
  EXPECT_DOUBLE_EQ(ratquad(x, x, cfg), 1.0);
}

TEST(RatQuad, HandComputedValue) {
  // alpha=2, l=10, squared distance 400 -> (1 + 400/400)^-2 = 0.25
  KernelConfig cfg;
  cfg.alpha = 2.0;
  cfg.length_scale = 10.0;
  Eigen::VectorXd a(1), b(1);
  a << 0.0;
  b << 20.0;
  EXPECT_DOUBLE_EQ(ratquad(a, b, cfg), 0.25);
}

TEST(RatQuad, Symmetry) {
  KernelConfig cfg;
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd a = random_matrix(1, 6, rng).row(0);
    const Eigen::VectorXd b = random_matrix(1, 6, rng).row(0);
    EXPECT_DOUBLE_EQ(ratquad(a, b, cfg), ratquad(b, a, cfg));
  }
}

TEST(RatQuad, MismatchedLengthsThrow) {
  KernelConfig cfg;
  Eigen::VectorXd a(2), b(3);
  a.setZero();
  b.setZero();
  EXPECT_THROW(ratquad(a, b, cfg), std::invalid_argument);
}

TEST(RatQuad, MonotoneInDistance) {
  KernelConfig cfg;
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(1);
  double prev = 1.0;
  for (double d = 1.0; d < 100.0; d += 7.0) {
    Eigen::VectorXd p(1);
    p << d;
    const double v = ratquad(origin, p, cfg);
    EXPECT_LT(v, prev);
    EXPECT_GT(v, 0.0);
    prev = v;
  }
}

TEST(Gram, MatchesScalarEvaluation) {
  KernelConfig cfg;
  Eigen::MatrixXd a(3, 2), b(3, 2);
  a << -40, -50, -60, -70, -55, -45;
  b << -42, -52, -61, -69, -80, -30;
  const Eigen::MatrixXd k = gram(a, b, cfg);
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) {
      EXPECT_DOUBLE_EQ(k(i, j), ratquad(a.row(i), b.row(j), cfg));
    }
  }
}

TEST(Gram, CrossGramIsTransposeOfSwapped) {
  KernelConfig cfg;
  Rng rng(5);
  const Eigen::MatrixXd a = random_matrix(4, 3, rng);
  const Eigen::MatrixXd b = random_matrix(6, 3, rng);
  const Eigen::MatrixXd kab = gram(a, b, cfg);
  const Eigen::MatrixXd kba = gram(b, a, cfg);
  EXPECT_EQ(kab, kba.transpose());
}

TEST(Gram, SymmetricHasUnitDiagonalAndBoundedEntries) {
  KernelConfig cfg;
  Rng rng(6);
  const Eigen::MatrixXd a = random_matrix(10, 4, rng);
  const Eigen::MatrixXd k = gram_symmetric(a, cfg);
  EXPECT_EQ(k, Eigen::MatrixXd(k.transpose()));
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    EXPECT_DOUBLE_EQ(k(i, i), 1.0);
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      EXPECT_GT(k(i, j), 0.0);
      EXPECT_LE(k(i, j), 1.0);
    }
  }
}

TEST(Gram, JitteredMatrixFactorizes) {
  KernelConfig cfg;
  Rng rng(7);
  Eigen::MatrixXd a = random_matrix(12, 4, rng);
  a.row(5) = a.row(2);  // duplicate fingerprints happen in real databases
  Eigen::MatrixXd k = gram_symmetric(a, cfg);
  k.diagonal().array() += 1e-8;
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  EXPECT_EQ(llt.info(), Eigen::Success);
}

TEST(Gram, DimensionMismatchThrows) {
  KernelConfig cfg;
  EXPECT_THROW(gram(Eigen::MatrixXd::Zero(2, 3), Eigen::MatrixXd::Zero(2, 4), cfg),
               std::invalid_argument);
}

TEST(KernelConfig, Validation) {
  KernelConfig bad;
  bad.alpha = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = KernelConfig{};
  bad.length_scale = -1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = KernelConfig{};
  bad.noise_var = -0.1;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_NO_THROW(KernelConfig{}.validate());
}

}  // namespace
}  // namespace sgploc
