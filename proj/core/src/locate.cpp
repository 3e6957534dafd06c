#include "sgploc/locate.hpp"

#include "sgploc/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sgploc {

namespace {

using nlohmann::json;

Eigen::VectorXd labels_x(const FingerprintDataset& ds) {
  Eigen::VectorXd v(ds.rows());
  for (Eigen::Index i = 0; i < ds.rows(); ++i) v(i) = ds.labels[i].x;
  return v;
}

Eigen::VectorXd labels_y(const FingerprintDataset& ds) {
  Eigen::VectorXd v(ds.rows());
  for (Eigen::Index i = 0; i < ds.rows(); ++i) v(i) = ds.labels[i].y;
  return v;
}

}  // namespace

FloorLocalizer train_floor(const FingerprintDataset& train, const KernelConfig& cfg,
                           int target_v, const GridSpec& grid, bool exact,
                           const WapFilterConfig& wap) {
  if (train.empty()) throw std::invalid_argument("train_floor: empty dataset");
  for (const auto& lab : train.labels) {
    if (lab.building != train.labels[0].building ||
        lab.floor != train.labels[0].floor) {
      throw std::invalid_argument("train_floor: dataset spans multiple floors");
    }
  }

  const auto t0 = std::chrono::steady_clock::now();

  FloorLocalizer loc;
  loc.building = train.labels[0].building;
  loc.floor = train.labels[0].floor;
  loc.original_w = static_cast<std::size_t>(train.cols());
  loc.fill = train.fill;
  loc.exact = exact;
  loc.seed = grid.seed;
  loc.train_count = train.rows();

  ColumnSelection sel = drop_dead_columns(train);
  Eigen::MatrixXd x = project_columns(train.features, sel);
  if (target_v >= 1 && target_v < static_cast<int>(x.cols())) {
    const ColumnSelection filtered = wap_filter(x, target_v, wap);
    x = project_columns(x, filtered);
    sel = compose(sel, filtered);
  }
  sel.target_v = target_v;
  loc.columns = sel;

  const Eigen::VectorXd yx = labels_x(train);
  const Eigen::VectorXd yy = labels_y(train);

  if (exact) {
    loc.model_x = gp_fit(x, yx, cfg);
    loc.model_y = gp_fit(x, yy, cfg);
    loc.sparsity_pct = 100.0;
  } else {
    loc.inducing_rows = select_inducing(train, grid);
    Eigen::MatrixXd z(static_cast<Eigen::Index>(loc.inducing_rows.size()), x.cols());
    for (std::size_t r = 0; r < loc.inducing_rows.size(); ++r) {
      z.row(static_cast<Eigen::Index>(r)) = x.row(loc.inducing_rows[r]);
    }
    loc.model_x = sgp_fit(x, yx, z, cfg);
    loc.model_y = sgp_fit(x, yy, z, cfg);
    loc.sparsity_pct = 100.0 * static_cast<double>(z.rows()) /
                       static_cast<double>(train.rows());
  }

  loc.fit_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  loc.trained_at = static_cast<std::int64_t>(std::time(nullptr));
  return loc;
}

FloorLocalizer train_floor(const FingerprintDataset& train, const TrainOptions& opts) {
  GridSpec grid;
  if (!opts.exact) {
    grid = sparsity_to_grid(train, opts.target_sparsity, opts.cell_size, opts.seed);
  } else {
    grid.seed = opts.seed;
  }
  return train_floor(train, opts.kernel, opts.target_v, grid, opts.exact, opts.wap);
}

namespace {

Prediction predict_one(const CoordModel& model, const Eigen::MatrixXd& q) {
  if (std::holds_alternative<GpModel>(model)) {
    return gp_predict(std::get<GpModel>(model), q);
  }
  return sgp_predict(std::get<SgpModel>(model), q);
}

}  // namespace

PositionEstimate predict_position(const FloorLocalizer& loc,
                                  const Eigen::VectorXd& rssi) {
  if (static_cast<std::size_t>(rssi.size()) != loc.original_w) {
    throw std::invalid_argument("predict_position: query length differs from dataset W");
  }
  const Eigen::VectorXd reduced = project_columns(rssi, loc.columns);
  Eigen::MatrixXd q(1, reduced.size());
  q.row(0) = reduced;
  const Prediction px = predict_one(loc.model_x, q);
  const Prediction py = predict_one(loc.model_y, q);
  PositionEstimate est;
  est.x = px.mean(0);
  est.y = py.mean(0);
  est.sd_x = std::sqrt(px.var(0));
  est.sd_y = std::sqrt(py.var(0));
  return est;
}

Deployment deployment_from_training(const FingerprintDataset& train) {
  struct Acc {
    double sx = 0.0, sy = 0.0;
    int n = 0;
  };
  std::map<std::pair<int, int>, Acc> acc;
  for (const auto& lab : train.labels) {
    Acc& a = acc[{lab.building, lab.floor}];
    a.sx += lab.x;
    a.sy += lab.y;
    a.n += 1;
  }
  Deployment dep;
  for (const auto& [key, a] : acc) {
    DeployedNode node;
    node.node_id = "b" + std::to_string(key.first) + "_f" + std::to_string(key.second);
    node.building = key.first;
    node.floor = key.second;
    node.x = a.sx / a.n;
    node.y = a.sy / a.n;
    dep.nodes.push_back(node);
  }
  return dep;
}

std::pair<int, int> assign_building_floor(const Deployment& dep,
                                          const FingerprintDataset& train,
                                          const Eigen::VectorXd& rssi) {
  if (dep.nodes.empty()) throw std::invalid_argument("assign: empty deployment");
  if (train.empty()) throw std::invalid_argument("assign: empty training set");
  if (rssi.size() != train.cols()) {
    throw std::invalid_argument("assign: query width differs from training width");
  }

  const Eigen::VectorXd d2 =
      (train.features.rowwise() - rssi.transpose()).rowwise().squaredNorm();

  // The device reaches the node serving the area its fingerprint matches
  // best; the nearest stored fingerprint is the offline stand-in for that.
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < train.rows(); ++i) {
    if (d2(i) < d2(best)) best = i;
  }
  const int nn_building = train.labels[static_cast<std::size_t>(best)].building;
  const int nn_floor = train.labels[static_cast<std::size_t>(best)].floor;

  const DeployedNode* node = nullptr;
  for (const auto& cand : dep.nodes) {
    if (cand.building == nn_building && cand.floor == nn_floor) {
      node = &cand;
      break;
    }
  }
  if (node == nullptr) {
    // Nearest-floor node within the same building.
    int best_gap = std::numeric_limits<int>::max();
    for (const auto& cand : dep.nodes) {
      if (cand.building != nn_building) continue;
      const int gap = std::abs(cand.floor - nn_floor);
      if (gap < best_gap ||
          (gap == best_gap && node != nullptr && cand.floor < node->floor)) {
        node = &cand;
        best_gap = gap;
      }
    }
  }
  if (node == nullptr) {
    throw std::invalid_argument("assign: no node deployed in building " +
                                std::to_string(nn_building));
  }

  // Candidate floors: the node's floor plus its neighbors in this building's
  // floor stack (binary at the top/bottom, ternary elsewhere).
  const std::vector<int> floors = floors_in(train, node->building);
  if (floors.empty()) {
    throw std::invalid_argument("assign: no training rows for building " +
                                std::to_string(node->building));
  }
  std::size_t center = 0;
  for (std::size_t i = 1; i < floors.size(); ++i) {
    if (std::abs(floors[i] - node->floor) < std::abs(floors[center] - node->floor)) {
      center = i;
    }
  }
  std::set<int> candidates{floors[center]};
  if (center > 0) candidates.insert(floors[center - 1]);
  if (center + 1 < floors.size()) candidates.insert(floors[center + 1]);

  std::vector<Eigen::Index> pool;
  for (Eigen::Index i = 0; i < train.rows(); ++i) {
    const auto& lab = train.labels[static_cast<std::size_t>(i)];
    if (lab.building == node->building && candidates.count(lab.floor) > 0) {
      pool.push_back(i);
    }
  }
  if (pool.empty()) {
    throw std::invalid_argument("assign: no training rows for candidate floors");
  }

  const int k = std::min<int>(7, static_cast<int>(pool.size()));
  std::partial_sort(pool.begin(), pool.begin() + k, pool.end(),
                    [&d2](Eigen::Index a, Eigen::Index b) {
                      return d2(a) != d2(b) ? d2(a) < d2(b) : a < b;
                    });
  std::map<int, int> votes;
  for (int i = 0; i < k; ++i) {
    votes[train.labels[static_cast<std::size_t>(pool[static_cast<std::size_t>(i)])].floor]++;
  }
  int best_floor = floors[center];
  int best_count = 0;
  bool tied = false;
  for (const auto& [floor, count] : votes) {
    if (count > best_count) {
      best_floor = floor;
      best_count = count;
      tied = false;
    } else if (count == best_count) {
      tied = true;
    }
  }
  if (tied) best_floor = floors[center];

  return {node->building, best_floor};
}

double error3d(double err2d, bool building_hit, bool floor_hit) {
  if (err2d < 0.0) throw std::invalid_argument("error3d: negative 2D error");
  return (building_hit ? 0.0 : kBuildingPenaltyM) +
         (floor_hit ? 0.0 : kFloorPenaltyM) + err2d;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<std::pair<double, double>> make_cdf(std::vector<double> errors,
                                                double resolution) {
  std::vector<std::pair<double, double>> cdf;
  if (errors.empty()) return cdf;
  std::sort(errors.begin(), errors.end());
  const double max_err = errors.back();
  const auto n_bins = static_cast<std::size_t>(std::ceil(max_err / resolution)) + 1;
  const double n = static_cast<double>(errors.size());
  std::size_t covered = 0;
  for (std::size_t b = 0; b < n_bins; ++b) {
    const double edge = static_cast<double>(b) * resolution;
    while (covered < errors.size() && errors[covered] <= edge + 1e-12) ++covered;
    cdf.emplace_back(edge, static_cast<double>(covered) / n);
  }
  if (cdf.back().second < 1.0) cdf.emplace_back(max_err, 1.0);
  return cdf;
}

LocalizationMetrics evaluate(const std::vector<FloorLocalizer>& localizers,
                             const Deployment& dep,
                             const FingerprintDataset& train,
                             const FingerprintDataset& test) {
  if (test.empty()) throw std::invalid_argument("evaluate: empty test set");
  std::map<std::pair<int, int>, const FloorLocalizer*> by_floor;
  for (const auto& loc : localizers) {
    by_floor[{loc.building, loc.floor}] = &loc;
  }

  std::vector<double> errors_2d;
  errors_2d.reserve(static_cast<std::size_t>(test.rows()));
  double sum_3d = 0.0;
  Eigen::Index building_hits = 0;
  Eigen::Index floor_hits = 0;
  for (Eigen::Index i = 0; i < test.rows(); ++i) {
    const Eigen::VectorXd rssi = test.features.row(i);
    const auto [b, f] = assign_building_floor(dep, train, rssi);
    const auto it = by_floor.find({b, f});
    if (it == by_floor.end()) {
      throw std::runtime_error("evaluate: no localizer for assigned building " +
                               std::to_string(b) + " floor " + std::to_string(f));
    }
    const PositionEstimate est = predict_position(*it->second, rssi);
    const auto& lab = test.labels[static_cast<std::size_t>(i)];
    const double err2d = std::hypot(est.x - lab.x, est.y - lab.y);
    const bool bhit = b == lab.building;
    const bool fhit = f == lab.floor;
    errors_2d.push_back(err2d);
    sum_3d += error3d(err2d, bhit, fhit);
    building_hits += bhit ? 1 : 0;
    floor_hits += fhit ? 1 : 0;
  }

  LocalizationMetrics m;
  m.n_test = test.rows();
  m.mean_2d = mean_of(errors_2d);
  m.mean_3d = sum_3d / static_cast<double>(test.rows());
  m.building_hit = static_cast<double>(building_hits) / static_cast<double>(test.rows());
  m.floor_hit = static_cast<double>(floor_hits) / static_cast<double>(test.rows());
  m.cdf = make_cdf(errors_2d);
  double weighted_sparsity = 0.0;
  Eigen::Index total_train = 0;
  for (const auto& loc : localizers) {
    m.train_time += loc.fit_seconds;
    weighted_sparsity += loc.sparsity_pct * static_cast<double>(loc.train_count);
    total_train += loc.train_count;
  }
  m.sparsity = total_train > 0 ? weighted_sparsity / static_cast<double>(total_train) : 0.0;
  return m;
}

std::vector<double> localization_errors_2d(const FloorLocalizer& loc,
                                           const FingerprintDataset& test) {
  std::vector<double> errors;
  errors.reserve(static_cast<std::size_t>(test.rows()));
  for (Eigen::Index i = 0; i < test.rows(); ++i) {
    const PositionEstimate est = predict_position(loc, test.features.row(i));
    const auto& lab = test.labels[static_cast<std::size_t>(i)];
    errors.push_back(std::hypot(est.x - lab.x, est.y - lab.y));
  }
  return errors;
}

namespace {

json kernel_to_json(const KernelConfig& cfg) {
  return json{{"alpha", cfg.alpha},
              {"length_scale", cfg.length_scale},
              {"noise_var", cfg.noise_var},
              {"jitter", cfg.jitter}};
}

KernelConfig kernel_from_json(const json& j) {
  KernelConfig cfg;
  cfg.alpha = j.at("alpha").get<double>();
  cfg.length_scale = j.at("length_scale").get<double>();
  cfg.noise_var = j.at("noise_var").get<double>();
  cfg.jitter = j.at("jitter").get<double>();
  return cfg;
}

json options_to_json(const TrainOptions& opts) {
  return json{{"kernel", kernel_to_json(opts.kernel)},
              {"target_v", opts.target_v},
              {"similarity_threshold", opts.wap.similarity_threshold},
              {"similarity_ratio", opts.wap.similarity_ratio},
              {"cell_size", opts.cell_size},
              {"target_sparsity", opts.target_sparsity},
              {"seed", opts.seed},
              {"exact", opts.exact}};
}

TrainOptions options_from_json(const json& j) {
  TrainOptions opts;
  opts.kernel = kernel_from_json(j.at("kernel"));
  opts.target_v = j.at("target_v").get<int>();
  opts.wap.similarity_threshold = j.at("similarity_threshold").get<double>();
  opts.wap.similarity_ratio = j.at("similarity_ratio").get<double>();
  opts.cell_size = j.at("cell_size").get<double>();
  opts.target_sparsity = j.at("target_sparsity").get<double>();
  opts.seed = j.at("seed").get<std::uint64_t>();
  opts.exact = j.at("exact").get<bool>();
  return opts;
}

json dataset_to_json(const FingerprintDataset& ds) {
  json features = json::array();
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < ds.cols(); ++j) row.push_back(ds.features(i, j));
    features.push_back(std::move(row));
  }
  json labels = json::array();
  for (const auto& lab : ds.labels) {
    labels.push_back(json{{"x", lab.x},
                          {"y", lab.y},
                          {"floor", lab.floor},
                          {"building", lab.building},
                          {"timestamp", lab.timestamp}});
  }
  return json{{"column_ids", ds.column_ids},
              {"imputed", ds.imputed},
              {"fill", ds.fill},
              {"features", std::move(features)},
              {"labels", std::move(labels)}};
}

FingerprintDataset dataset_from_json(const json& j) {
  FingerprintDataset ds;
  ds.column_ids = j.at("column_ids").get<std::vector<std::string>>();
  ds.imputed = j.at("imputed").get<bool>();
  ds.fill = j.at("fill").get<double>();
  const auto& features = j.at("features");
  const auto n = static_cast<Eigen::Index>(features.size());
  const auto w = static_cast<Eigen::Index>(ds.column_ids.size());
  ds.features.resize(n, w);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = features[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < w; ++c) {
      ds.features(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  for (const auto& lab : j.at("labels")) {
    SampleLabel s;
    s.x = lab.at("x").get<double>();
    s.y = lab.at("y").get<double>();
    s.floor = lab.at("floor").get<int>();
    s.building = lab.at("building").get<int>();
    s.timestamp = lab.at("timestamp").get<std::int64_t>();
    ds.labels.push_back(s);
  }
  return ds;
}

}  // namespace

std::string metrics_to_json(const LocalizationMetrics& m) {
  json j{{"mean_2d_m", m.mean_2d},
         {"mean_3d_m", m.mean_3d},
         {"building_hit_rate", m.building_hit},
         {"floor_hit_rate", m.floor_hit},
         {"train_time_s", m.train_time},
         {"sparsity_pct", m.sparsity},
         {"n_test", m.n_test}};
  return j.dump(2);
}

void save_metrics_json(const LocalizationMetrics& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << metrics_to_json(m) << "\n";
}

void save_cdf_csv(const std::vector<std::pair<double, double>>& cdf,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << "error_m,cum_prob\n";
  char buf[80];
  for (const auto& [err, prob] : cdf) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", err, prob);
    out << buf;
  }
}

void save_localizer(const FloorLocalizer& loc, const FingerprintDataset& train,
                    const TrainOptions& opts, const std::string& path) {
  json j{{"schema", "sgploc-localizer-v1"},
         {"building", loc.building},
         {"floor", loc.floor},
         {"options", options_to_json(opts)},
         {"train", dataset_to_json(train)}};
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << j.dump() << "\n";
}

LocalizerBundle load_localizer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (j.value("schema", "") != "sgploc-localizer-v1") {
    throw ParseError(path + ": not a localizer bundle");
  }
  LocalizerBundle bundle;
  bundle.opts = options_from_json(j.at("options"));
  bundle.train = dataset_from_json(j.at("train"));
  bundle.localizer = train_floor(bundle.train, bundle.opts);
  return bundle;
}

}  // namespace sgploc
