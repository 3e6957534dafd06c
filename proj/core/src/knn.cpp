#include "sgploc/knn.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sgploc {

std::pair<double, double> knn_regress(const FingerprintDataset& train,
                                      const KnnConfig& cfg,
                                      const Eigen::VectorXd& query) {
  const Eigen::Index n = train.rows();
  if (n < 1) throw std::invalid_argument("knn_regress: empty training set");
  if (cfg.k < 1 || cfg.k > n) {
    throw std::invalid_argument("knn_regress: k must be in [1, N]");
  }
  if (query.size() != train.cols()) {
    throw std::invalid_argument("knn_regress: query width differs from training width");
  }

  const Eigen::VectorXd d2 =
      (train.features.rowwise() - query.transpose()).rowwise().squaredNorm();

  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::partial_sort(idx.begin(), idx.begin() + cfg.k, idx.end(),
                    [&d2](Eigen::Index a, Eigen::Index b) {
                      return d2(a) != d2(b) ? d2(a) < d2(b) : a < b;
                    });

  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < cfg.k; ++i) {
    sx += train.labels[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])].x;
    sy += train.labels[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])].y;
  }
  return {sx / cfg.k, sy / cfg.k};
}

}  // namespace sgploc
