#include "sgploc/node.hpp"

#include "sgploc/errors.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace sgploc {

namespace {

using nlohmann::json;

FingerprintDataset append_samples(const FingerprintDataset& base,
                                  const std::vector<RssiSample>& samples) {
  if (samples.empty()) return base;
  FingerprintDataset out;
  out.column_ids = base.column_ids;
  out.imputed = base.imputed;
  out.fill = base.fill;
  const Eigen::Index n0 = base.rows();
  out.features.resize(n0 + static_cast<Eigen::Index>(samples.size()), base.cols());
  out.features.topRows(n0) = base.features;
  out.labels = base.labels;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const RssiSample& s = samples[i];
    out.features.row(n0 + static_cast<Eigen::Index>(i)) = s.rssi;
    out.labels.push_back({s.x, s.y, s.floor, s.building, s.timestamp});
  }
  return out;
}

}  // namespace

LocalizationNode::LocalizationNode(FingerprintDataset bootstrap, Settings settings,
                                   Trainer trainer)
    : settings_(std::move(settings)),
      trainer_(trainer ? std::move(trainer)
                       : [](const FingerprintDataset& ds, const TrainOptions& opts) {
                           return train_floor(ds, opts);
                         }),
      dataset_(std::move(bootstrap)) {
  w_ = dataset_.cols();
  if (w_ < 1) {
    throw std::invalid_argument("LocalizationNode: bootstrap defines no WAP columns");
  }
}

LocateResult LocalizationNode::locate(const Eigen::VectorXd& rssi) const {
  std::shared_ptr<const FloorLocalizer> snapshot;
  {
    std::lock_guard<std::mutex> lock(state_mu_);
    snapshot = snapshot_;
  }
  if (!snapshot) throw NotTrainedError("node has no trained model yet");
  if (static_cast<std::size_t>(rssi.size()) != snapshot->original_w) {
    throw BadRequestError("rssi length " + std::to_string(rssi.size()) +
                          " does not match node W " +
                          std::to_string(snapshot->original_w));
  }
  const PositionEstimate est = predict_position(*snapshot, rssi);
  return {est.x, est.y, est.sd_x, est.sd_y, snapshot->floor, snapshot->building};
}

std::size_t LocalizationNode::ingest(const RssiSample& sample) {
  if (sample.rssi.size() != w_) {
    throw BadRequestError("sample length " + std::to_string(sample.rssi.size()) +
                          " does not match node W " + std::to_string(w_));
  }
  if (sample.building != settings_.building || sample.floor != settings_.floor) {
    throw BadRequestError("sample labeled for building " +
                          std::to_string(sample.building) + " floor " +
                          std::to_string(sample.floor) + ", node serves building " +
                          std::to_string(settings_.building) + " floor " +
                          std::to_string(settings_.floor));
  }
  std::lock_guard<std::mutex> lock(state_mu_);
  pending_.push_back(sample);
  return pending_.size();
}

RetrainResult LocalizationNode::retrain() {
  std::lock_guard<std::mutex> retrain_lock(retrain_mu_);

  FingerprintDataset base;
  std::vector<RssiSample> staged;
  {
    std::lock_guard<std::mutex> lock(state_mu_);
    base = dataset_;
    staged = std::move(pending_);
    pending_.clear();
  }
  if (base.rows() + static_cast<Eigen::Index>(staged.size()) < 1) {
    throw BadRequestError("no data to train on");
  }

  FingerprintDataset merged = append_samples(base, staged);
  std::shared_ptr<const FloorLocalizer> fresh;
  try {
    fresh = std::make_shared<const FloorLocalizer>(
        trainer_(merged, settings_.train));
  } catch (...) {
    // Drained samples were not incorporated; return them to the buffer in
    // front of anything ingested while we were fitting.
    std::lock_guard<std::mutex> lock(state_mu_);
    pending_.insert(pending_.begin(), staged.begin(), staged.end());
    throw;
  }

  RetrainResult result{fresh->train_count, fresh->fit_seconds, fresh->sparsity_pct};
  {
    std::lock_guard<std::mutex> lock(state_mu_);
    dataset_ = std::move(merged);
    snapshot_ = std::move(fresh);
    ++model_version_;
  }
  return result;
}

NodeInfo LocalizationNode::info() const {
  NodeInfo out;
  out.building = settings_.building;
  out.floor = settings_.floor;
  out.node_x = settings_.node_x;
  out.node_y = settings_.node_y;
  out.w = static_cast<std::size_t>(w_);
  std::lock_guard<std::mutex> lock(state_mu_);
  out.pending = pending_.size();
  out.model_version = model_version_;
  if (snapshot_) {
    out.trained = true;
    out.trained_at = snapshot_->trained_at;
    out.train_count = snapshot_->train_count;
    out.sparsity = snapshot_->sparsity_pct;
  }
  return out;
}

void LocalizationNode::save(const std::string& dir) const {
  FingerprintDataset data;
  {
    std::lock_guard<std::mutex> lock(state_mu_);
    data = dataset_;
  }
  if (data.empty()) {
    throw std::invalid_argument("LocalizationNode::save: nothing incorporated yet");
  }
  std::filesystem::create_directories(dir);
  save_generic(data, dir + "/data.csv");

  json j{{"schema", "sgploc-node-v1"},
         {"building", settings_.building},
         {"floor", settings_.floor},
         {"node_x", settings_.node_x},
         {"node_y", settings_.node_y},
         {"kernel",
          {{"alpha", settings_.train.kernel.alpha},
           {"length_scale", settings_.train.kernel.length_scale},
           {"noise_var", settings_.train.kernel.noise_var},
           {"jitter", settings_.train.kernel.jitter}}},
         {"target_v", settings_.train.target_v},
         {"similarity_threshold", settings_.train.wap.similarity_threshold},
         {"similarity_ratio", settings_.train.wap.similarity_ratio},
         {"cell_size", settings_.train.cell_size},
         {"target_sparsity", settings_.train.target_sparsity},
         {"seed", settings_.train.seed},
         {"exact", settings_.train.exact}};
  std::ofstream out(dir + "/node.json");
  if (!out) throw ParseError(dir + "/node.json: cannot open file for writing");
  out << j.dump(2) << "\n";
}

LocalizationNode LocalizationNode::load(const std::string& dir, Trainer trainer) {
  std::ifstream in(dir + "/node.json");
  if (!in) throw ParseError(dir + "/node.json: cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(dir + "/node.json: " + e.what());
  }
  if (j.value("schema", "") != "sgploc-node-v1") {
    throw ParseError(dir + "/node.json: not a node state bundle");
  }
  Settings settings;
  settings.building = j.at("building").get<int>();
  settings.floor = j.at("floor").get<int>();
  settings.node_x = j.at("node_x").get<double>();
  settings.node_y = j.at("node_y").get<double>();
  settings.train.kernel.alpha = j.at("kernel").at("alpha").get<double>();
  settings.train.kernel.length_scale = j.at("kernel").at("length_scale").get<double>();
  settings.train.kernel.noise_var = j.at("kernel").at("noise_var").get<double>();
  settings.train.kernel.jitter = j.at("kernel").at("jitter").get<double>();
  settings.train.target_v = j.at("target_v").get<int>();
  settings.train.wap.similarity_threshold = j.at("similarity_threshold").get<double>();
  settings.train.wap.similarity_ratio = j.at("similarity_ratio").get<double>();
  settings.train.cell_size = j.at("cell_size").get<double>();
  settings.train.target_sparsity = j.at("target_sparsity").get<double>();
  settings.train.seed = j.at("seed").get<std::uint64_t>();
  settings.train.exact = j.at("exact").get<bool>();

  FingerprintDataset data = load_generic(dir + "/data.csv");
  return LocalizationNode(std::move(data), std::move(settings), std::move(trainer));
}

}  // namespace sgploc
