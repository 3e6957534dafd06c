#pragma once

#include "sgploc/dataset.hpp"
#include "sgploc/gp.hpp"
#include "sgploc/kernel.hpp"
#include "sgploc/reduce.hpp"
#include "sgploc/sgp.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sgploc {

// Eq-style penalties for wrong building / wrong floor, in meters.
inline constexpr double kBuildingPenaltyM = 50.0;
inline constexpr double kFloorPenaltyM = 4.0;

using CoordModel = std::variant<GpModel, SgpModel>;

// One floor's pair of coordinate regressors plus everything needed to map a
// raw W-dimensional RSSI query into model inputs.
struct FloorLocalizer {
  int building = 0;
  int floor = 0;
  ColumnSelection columns;   // indices into the original W columns
  std::size_t original_w = 0;
  double fill = kDefaultFill;
  std::vector<Eigen::Index> inducing_rows;  // rows of the floor subset used as Z
  bool exact = false;
  CoordModel model_x;
  CoordModel model_y;
  std::int64_t trained_at = 0;
  Eigen::Index train_count = 0;
  double fit_seconds = 0.0;
  double sparsity_pct = 100.0;
  std::uint64_t seed = 0;
};

struct TrainOptions {
  KernelConfig kernel;
  int target_v = 0;  // 0 disables the similarity filter
  WapFilterConfig wap;
  double cell_size = 5.0;
  double target_sparsity = 50.0;
  std::uint64_t seed = 1;
  bool exact = false;
};

// Reduction pipeline (dead-column drop, similarity filter, grid inducing
// selection) followed by one model per coordinate. exact=true skips the
// inducing selection and fits exact GPs.
FloorLocalizer train_floor(const FingerprintDataset& train, const KernelConfig& cfg,
                           int target_v, const GridSpec& grid, bool exact,
                           const WapFilterConfig& wap = {});

// Same, deriving the grid from opts.target_sparsity / opts.cell_size.
FloorLocalizer train_floor(const FingerprintDataset& train, const TrainOptions& opts);

struct PositionEstimate {
  double x = 0.0;
  double y = 0.0;
  double sd_x = 0.0;
  double sd_y = 0.0;
};

// rssi must be the original (pre-filter) width, already imputed.
PositionEstimate predict_position(const FloorLocalizer& loc,
                                  const Eigen::VectorXd& rssi);

struct DeployedNode {
  std::string node_id;
  int building = 0;
  int floor = 0;
  double x = 0.0;  // fixed, known mount position
  double y = 0.0;
};

struct Deployment {
  std::vector<DeployedNode> nodes;
};

// One node per (building, floor) present in the training data, placed at the
// centroid of that floor's reference points.
Deployment deployment_from_training(const FingerprintDataset& train);

// Serving-node discovery plus neighbor-floor classification. The building
// comes from the reached node; the floor is a k=7 nearest-neighbor vote over
// that building's fingerprints restricted to the node's floor and its
// adjacent floors (binary at the top/bottom of a building). Vote ties
// resolve to the node's own floor.
std::pair<int, int> assign_building_floor(const Deployment& dep,
                                          const FingerprintDataset& train,
                                          const Eigen::VectorXd& rssi);

// (1 - building_hit) * 50 + (1 - floor_hit) * 4 + err2d.
double error3d(double err2d, bool building_hit, bool floor_hit);

struct LocalizationMetrics {
  double mean_2d = 0.0;
  double mean_3d = 0.0;
  double building_hit = 0.0;
  double floor_hit = 0.0;
  std::vector<std::pair<double, double>> cdf;  // (error_m, cum_prob)
  double train_time = 0.0;
  double sparsity = 0.0;
  Eigen::Index n_test = 0;
};

// Full serving path per test row: assign a building/floor, localize with the
// assigned floor's localizer, score 2D and 3D errors against the labels.
LocalizationMetrics evaluate(const std::vector<FloorLocalizer>& localizers,
                             const Deployment& dep,
                             const FingerprintDataset& train,
                             const FingerprintDataset& test);

// Per-row 2D errors of a single-floor localizer on its own floor's test rows.
std::vector<double> localization_errors_2d(const FloorLocalizer& loc,
                                           const FingerprintDataset& test);

// Empirical CDF at the given resolution; last point has probability 1.
std::vector<std::pair<double, double>> make_cdf(std::vector<double> errors,
                                                double resolution = 0.1);

double mean_of(const std::vector<double>& v);

// Metrics/plot-data writers.
std::string metrics_to_json(const LocalizationMetrics& m);
void save_metrics_json(const LocalizationMetrics& m, const std::string& path);
void save_cdf_csv(const std::vector<std::pair<double, double>>& cdf,
                  const std::string& path);

// Localizer bundle: options plus the training subset, enough to re-fit
// deterministically on load. Exact bytes are not a compatibility surface.
void save_localizer(const FloorLocalizer& loc, const FingerprintDataset& train,
                    const TrainOptions& opts, const std::string& path);
struct LocalizerBundle {
  FloorLocalizer localizer;
  FingerprintDataset train;
  TrainOptions opts;
};
LocalizerBundle load_localizer(const std::string& path);

}  // namespace sgploc
