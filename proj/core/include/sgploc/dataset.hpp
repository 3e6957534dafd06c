#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sgploc {

// Value marking an undetected WAP in raw files (UJIIndoorLoc convention).
inline constexpr double kMissingSentinel = 100.0;
// Default dBm value substituted for undetected WAPs.
inline constexpr double kDefaultFill = -110.0;

struct SampleLabel {
  double x = 0.0;
  double y = 0.0;
  int floor = 0;
  int building = 0;
  std::int64_t timestamp = 0;
};

// One labeled fingerprint, as ingested by the node service.
struct RssiSample {
  Eigen::VectorXd rssi;
  double x = 0.0;
  double y = 0.0;
  int floor = 0;
  int building = 0;
  std::int64_t timestamp = 0;
};

// Immutable once loaded; rows align between features and labels.
struct FingerprintDataset {
  Eigen::MatrixXd features;             // N x W, dBm
  std::vector<SampleLabel> labels;      // N
  std::vector<std::string> column_ids;  // W, unique
  bool imputed = false;
  double fill = kDefaultFill;  // value undetected WAPs were mapped to

  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index cols() const { return features.cols(); }
  bool empty() const { return features.rows() == 0; }
};

// Readers. Both replace the missing-value sentinel by `fill` and return
// imputed datasets. load_uji expects the UJIIndoorLoc layout (WAP columns,
// then LONGITUDE/LATITUDE/FLOOR/BUILDINGID/.../TIMESTAMP); load_generic
// expects `wap_*,...,x,y,floor,building,timestamp` with missing RSSIs as
// empty cells or 100. load_auto sniffs the header.
FingerprintDataset load_uji(const std::string& path, double fill = kDefaultFill);
FingerprintDataset load_generic(const std::string& path, double fill = kDefaultFill);
FingerprintDataset load_auto(const std::string& path, double fill = kDefaultFill);

// Writers. save_generic emits the generic schema with full double precision
// (round-trips bit-exactly); save_uji emits the UJIIndoorLoc layout with
// fill mapped back to the sentinel 100.
void save_generic(const FingerprintDataset& ds, const std::string& path);
void save_uji(const FingerprintDataset& ds, const std::string& path);

// Replaces any remaining sentinel entries by `fill`. Idempotent.
void impute(FingerprintDataset& ds, double fill = kDefaultFill);

// Optional feature scaling to [0,1] using the dataset-wide min/max. Off by
// default everywhere; raw dBm is what the kernel length-scale is stated in.
void minmax_normalize(FingerprintDataset& ds);

// Rows matching (building, floor). May be empty.
FingerprintDataset subset(const FingerprintDataset& ds, int building, int floor);

std::vector<int> buildings_in(const FingerprintDataset& ds);
std::vector<int> floors_in(const FingerprintDataset& ds, int building);

// Row-wise concatenation; column_ids must match.
FingerprintDataset concat(const FingerprintDataset& a, const FingerprintDataset& b);

struct SplitResult {
  FingerprintDataset train;
  FingerprintDataset test;
};

// Train rows have timestamp < boundary. Throws if either side is empty.
SplitResult split_temporal(const FingerprintDataset& ds, std::int64_t boundary);

// floor(N * train_fraction) rows go to train; reproducible for a fixed seed.
SplitResult split_random(const FingerprintDataset& ds, double train_fraction,
                         std::uint64_t seed);

}  // namespace sgploc
