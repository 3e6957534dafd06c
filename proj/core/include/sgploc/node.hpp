#pragma once

#include "sgploc/dataset.hpp"
#include "sgploc/locate.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace sgploc {

struct LocateResult {
  double x = 0.0;
  double y = 0.0;
  double sd_x = 0.0;
  double sd_y = 0.0;
  int floor = 0;
  int building = 0;
};

struct RetrainResult {
  Eigen::Index train_count = 0;
  double fit_seconds = 0.0;
  double sparsity = 0.0;
};

struct NodeInfo {
  int building = 0;
  int floor = 0;
  double node_x = 0.0;
  double node_y = 0.0;
  bool trained = false;
  std::int64_t trained_at = 0;
  Eigen::Index train_count = 0;
  double sparsity = 0.0;
  std::size_t pending = 0;
  std::uint64_t model_version = 0;
  std::size_t w = 0;
};

// Single-floor localization service: answers queries against an immutable
// model snapshot, buffers labeled samples, and retrains on demand. Queries
// and ingests never observe a half-built model; retrain builds the
// replacement off to the side and swaps the snapshot pointer under the lock.
class LocalizationNode {
public:
  struct Settings {
    TrainOptions train;
    int building = 0;
    int floor = 0;
    double node_x = 0.0;
    double node_y = 0.0;
  };

  using Trainer =
      std::function<FloorLocalizer(const FingerprintDataset&, const TrainOptions&)>;

  // bootstrap may have zero rows (its column set still defines W); the node
  // stays untrained until the first retrain().
  LocalizationNode(FingerprintDataset bootstrap, Settings settings,
                   Trainer trainer = {});

  // Throws NotTrainedError before the first successful retrain and
  // BadRequestError on a mis-sized query.
  LocateResult locate(const Eigen::VectorXd& rssi) const;

  // Appends to the pending buffer; the active model is untouched. Returns
  // the pending count. Samples must match the node's W and floor.
  std::size_t ingest(const RssiSample& sample);

  // Fits a fresh localizer on (incorporated data + drained pending) and
  // atomically swaps it in. On failure the drained samples go back to the
  // buffer and the old snapshot keeps serving.
  RetrainResult retrain();

  NodeInfo info() const;

  // State bundle: settings JSON + the incorporated dataset as generic CSV.
  // Reloading and retraining reproduces the same responses.
  void save(const std::string& dir) const;
  static LocalizationNode load(const std::string& dir, Trainer trainer = {});

  const Settings& settings() const { return settings_; }

private:
  Settings settings_;
  Trainer trainer_;
  Eigen::Index w_ = 0;  // fixed at construction

  mutable std::mutex state_mu_;  // snapshot_, dataset_, pending_, version_
  std::mutex retrain_mu_;        // serializes retrains
  std::shared_ptr<const FloorLocalizer> snapshot_;
  FingerprintDataset dataset_;
  std::vector<RssiSample> pending_;
  std::uint64_t model_version_ = 0;
};

}  // namespace sgploc
