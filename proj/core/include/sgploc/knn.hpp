#pragma once

#include "sgploc/dataset.hpp"

#include <Eigen/Core>

namespace sgploc {

struct KnnConfig {
  int k = 20;
};

// Unweighted mean of the k nearest training rows' coordinates, Euclidean
// distance over imputed RSSI vectors. Ties break toward the lower row index.
std::pair<double, double> knn_regress(const FingerprintDataset& train,
                                      const KnnConfig& cfg,
                                      const Eigen::VectorXd& query);

}  // namespace sgploc
