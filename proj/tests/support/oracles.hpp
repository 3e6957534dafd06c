#pragma once

// Brute-force references used by the tests. These intentionally share no
// factorization or scan code with the library: the GP oracle forms the dense
// inverse explicitly, the k-NN oracle sorts every row, and the column-filter
// oracle physically erases columns from a copied table.

#include <sgploc/dataset.hpp>
#include <sgploc/gp.hpp>
#include <sgploc/kernel.hpp>
#include <sgploc/reduce.hpp>

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace sgploc::testing {

// Predictive mean/variance by explicit dense inversion of
// K_XX + (noise_var + jitter) I. Throws if the matrix is singular.
Prediction dense_gp_oracle(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const Eigen::MatrixXd& x_star, const KernelConfig& cfg);

// Unweighted k-NN coordinates via a full stable sort over (distance, index).
std::pair<double, double> knn_brute(const FingerprintDataset& train, int k,
                                    const Eigen::VectorXd& query);

// Column-filter reference: same resolved scan semantics, written as a
// literal erase-from-a-copy loop. Returns surviving original column indices
// in ascending order.
std::vector<int> wap_filter_oracle(const Eigen::MatrixXd& x, int target_v,
                                   double sim_threshold = 3.0,
                                   double sim_ratio = 0.85);

}  // namespace sgploc::testing
