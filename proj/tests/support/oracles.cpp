#include "support/oracles.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sgploc::testing {

namespace {

// Local kernel evaluation so the oracle does not depend on the library's.
double rq(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
          const KernelConfig& cfg) {
  const double d2 = (a - b).squaredNorm();
  return std::pow(1.0 + d2 / (2.0 * cfg.alpha * cfg.length_scale * cfg.length_scale),
                  -cfg.alpha);
}

}  // namespace

Prediction dense_gp_oracle(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const Eigen::MatrixXd& x_star, const KernelConfig& cfg) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      k(i, j) = rq(x.row(i), x.row(j), cfg);
    }
  }
  k.diagonal().array() += cfg.noise_var + cfg.jitter;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
  if (!lu.isInvertible()) {
    throw std::runtime_error("dense_gp_oracle: K + noise I is singular");
  }
  const Eigen::MatrixXd k_inv = lu.inverse();

  Prediction out;
  out.mean.resize(x_star.rows());
  out.var.resize(x_star.rows());
  for (Eigen::Index q = 0; q < x_star.rows(); ++q) {
    Eigen::VectorXd ks(n);
    for (Eigen::Index i = 0; i < n; ++i) ks(i) = rq(x_star.row(q), x.row(i), cfg);
    out.mean(q) = ks.dot(k_inv * y);
    out.var(q) = rq(x_star.row(q), x_star.row(q), cfg) - ks.dot(k_inv * ks);
  }
  return out;
}

std::pair<double, double> knn_brute(const FingerprintDataset& train, int k,
                                    const Eigen::VectorXd& query) {
  std::vector<std::pair<double, Eigen::Index>> dist;
  dist.reserve(static_cast<std::size_t>(train.rows()));
  for (Eigen::Index i = 0; i < train.rows(); ++i) {
    dist.emplace_back((train.features.row(i).transpose() - query).squaredNorm(), i);
  }
  std::stable_sort(dist.begin(), dist.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < k; ++i) {
    const auto& lab = train.labels[static_cast<std::size_t>(dist[static_cast<std::size_t>(i)].second)];
    sx += lab.x;
    sy += lab.y;
  }
  return {sx / k, sy / k};
}

std::vector<int> wap_filter_oracle(const Eigen::MatrixXd& x, int target_v,
                                   double sim_threshold, double sim_ratio) {
  struct Column {
    int original;
    Eigen::VectorXd values;
    double variance;
  };
  const Eigen::Index n = x.rows();
  std::vector<Column> cols;
  for (int j = 0; j < x.cols(); ++j) {
    Column c;
    c.original = j;
    c.values = x.col(j);
    const double mean = c.values.mean();
    c.variance = (c.values.array() - mean).square().sum() / static_cast<double>(n);
    cols.push_back(std::move(c));
  }
  std::stable_sort(cols.begin(), cols.end(),
                   [](const Column& a, const Column& b) { return a.variance > b.variance; });

  std::size_t p = 0;
  while (p + 1 < cols.size() && static_cast<int>(cols.size()) > target_v) {
    const Eigen::VectorXd delta = (cols[p].values - cols[p + 1].values).cwiseAbs();
    Eigen::Index similar = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (delta(i) <= sim_threshold) ++similar;
    }
    const double eta = static_cast<double>(similar) / static_cast<double>(n);
    if (eta == 1.0) {
      cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(p) + 1);
    } else if (eta >= sim_ratio) {
      Eigen::Index argmax = 0;
      for (Eigen::Index i = 1; i < n; ++i) {
        if (delta(i) > delta(argmax)) argmax = i;
      }
      if (cols[p].values(argmax) < cols[p + 1].values(argmax)) {
        cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(p));
      } else {
        cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(p) + 1);
      }
    } else {
      ++p;
    }
  }

  std::vector<int> kept;
  kept.reserve(cols.size());
  for (const auto& c : cols) kept.push_back(c.original);
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace sgploc::testing
