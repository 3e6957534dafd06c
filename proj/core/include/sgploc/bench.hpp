#pragma once

#include "sgploc/dataset.hpp"
#include "sgploc/knn.hpp"
#include "sgploc/locate.hpp"

#include <string>
#include <vector>

namespace sgploc {

enum class ModelKind { kExactGp, kSgpRi, kKnn };

struct BenchRow {
  std::string model;
  double mean_2d = 0.0;
  double fit_seconds = 0.0;   // median of the timed fits
  double sparsity = 0.0;      // percent; 100 for exact GP, 0 for k-NN
};

// Single-floor comparison table: exact GP, SGP-RI at each requested sparsity
// level, and the k-NN baseline. Each model is fitted `repeats` times and the
// median wall-clock fit time is reported; errors come from the last fit.
std::vector<BenchRow> run_bench(const FingerprintDataset& train,
                                const FingerprintDataset& test,
                                const std::vector<double>& sparsity_levels,
                                const TrainOptions& opts, int knn_k = 20,
                                int repeats = 3);

void save_bench_csv(const std::vector<BenchRow>& rows, const std::string& path);

// Rolling-retraining scenario: evaluate on each test period in order and,
// when retrain is set, fold the period into the training set and refit
// before the next one.
struct DynamicScenario {
  FingerprintDataset initial_train;
  std::vector<FingerprintDataset> groups;
  bool retrain = true;
};

std::vector<double> run_dynamic(const DynamicScenario& scenario,
                                const TrainOptions& opts,
                                ModelKind kind = ModelKind::kSgpRi,
                                int knn_k = 20);

}  // namespace sgploc
