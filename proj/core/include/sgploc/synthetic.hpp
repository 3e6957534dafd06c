#pragma once

#include "sgploc/dataset.hpp"

#include <cstdint>
#include <vector>

namespace sgploc {

// Log-distance path-loss radio model shared by both generators: RSSI at
// distance d is tx_power - 10 * path_loss_exp * log10(max(d, ref_dist)),
// plus Gaussian measurement noise, rounded to whole dBm. Readings below
// detect_floor are treated as undetected and take the fill value.
struct SyntheticSpec {
  int n_rps = 100;             // reference points, laid out on a grid
  double area_x = 30.0;        // meters
  double area_y = 30.0;
  int n_waps = 60;
  int samples_per_rp = 5;      // per period
  double tx_power_dbm = -30.0;
  double path_loss_exp = 3.0;
  double ref_dist_m = 1.0;
  double detect_floor_dbm = -104.0;
  double noise_sd_dbm = 4.0;
  double drift_bias_dbm = 0.0;  // added per period index
  std::uint64_t seed = 1;
  double fill = kDefaultFill;
  int building = 0;
  int floor = 0;
};

// One dataset per period over fixed geometry. Period i shifts all RSSIs by
// i * drift_bias_dbm and draws fresh noise; timestamps are period-ordered so
// temporal splits work. Deterministic per seed.
std::vector<FingerprintDataset> gen_synthetic(const SyntheticSpec& spec, int periods);

// Multi-building, multi-floor campus in the UJIIndoorLoc shape: one WAP set
// per floor, cross-floor attenuation, widely separated buildings. Used as a
// drop-in stand-in wherever a real multi-building database is not on disk.
struct CampusSpec {
  int n_buildings = 3;
  std::vector<int> floors_per_building = {4, 4, 5};
  double footprint_x = 60.0;     // per-building extent, meters
  double footprint_y = 30.0;
  double building_gap = 200.0;   // distance between building origins
  double floor_height = 4.0;
  double rp_spacing = 3.0;
  int samples_per_rp = 8;
  int waps_per_floor = 40;
  double tx_power_dbm = -30.0;
  double path_loss_exp = 3.2;
  double ref_dist_m = 1.0;
  double cross_floor_atten_db = 14.0;  // extra loss per floor crossed
  double detect_floor_dbm = -104.0;
  double noise_sd_dbm = 5.0;
  std::uint64_t seed = 7;
  double fill = kDefaultFill;
};

FingerprintDataset gen_campus(const CampusSpec& spec);

// Pads column ids to WAP001.. style so the campus round-trips through the
// UJIIndoorLoc reader/writer.
std::vector<std::string> uji_style_column_ids(int w);

}  // namespace sgploc
