#include "sgploc/synthetic.hpp"

#include "sgploc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sgploc {

namespace {

double path_loss_rssi(double tx_power, double exponent, double ref_dist,
                      double dist) {
  return tx_power - 10.0 * exponent * std::log10(std::max(dist, ref_dist) / ref_dist);
}

struct Point3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

// Grid of n points over [0,ax] x [0,ay], row-major with a small deterministic
// jitter so columns are not perfectly collinear.
std::vector<Point3> grid_points(int n, double ax, double ay, double z, Rng& rng,
                                double jitter) {
  const int nx = std::max(1, static_cast<int>(std::ceil(
                                 std::sqrt(static_cast<double>(n) * ax / std::max(ay, 1e-9)))));
  const int ny = std::max(1, (n + nx - 1) / nx);
  std::vector<Point3> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int iy = 0; iy < ny && static_cast<int>(pts.size()) < n; ++iy) {
    for (int ix = 0; ix < nx && static_cast<int>(pts.size()) < n; ++ix) {
      Point3 p;
      p.x = (nx == 1 ? 0.5 : static_cast<double>(ix) / (nx - 1)) * ax;
      p.y = (ny == 1 ? 0.5 : static_cast<double>(iy) / (ny - 1)) * ay;
      p.x += rng.uniform(-jitter, jitter);
      p.y += rng.uniform(-jitter, jitter);
      p.z = z;
      pts.push_back(p);
    }
  }
  return pts;
}

double dist3(const Point3& a, const Point3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

}  // namespace

std::vector<FingerprintDataset> gen_synthetic(const SyntheticSpec& spec, int periods) {
  if (periods < 1) throw std::invalid_argument("gen_synthetic: periods must be >= 1");
  if (spec.n_rps < 1 || spec.n_waps < 1 || spec.samples_per_rp < 1) {
    throw std::invalid_argument("gen_synthetic: counts must be >= 1");
  }
  if (spec.noise_sd_dbm < 0.0) {
    throw std::invalid_argument("gen_synthetic: noise sd must be >= 0");
  }

  // Geometry is drawn once so every period measures the same environment.
  Rng geo_rng(spec.seed);
  const std::vector<Point3> rps =
      grid_points(spec.n_rps, spec.area_x, spec.area_y, 1.2, geo_rng, 0.3);
  std::vector<Point3> waps;
  waps.reserve(static_cast<std::size_t>(spec.n_waps));
  for (int w = 0; w < spec.n_waps; ++w) {
    waps.push_back({geo_rng.uniform(0.0, spec.area_x),
                    geo_rng.uniform(0.0, spec.area_y), 2.5});
  }

  std::vector<FingerprintDataset> out;
  out.reserve(static_cast<std::size_t>(periods));
  char id[32];
  for (int period = 0; period < periods; ++period) {
    FingerprintDataset ds;
    ds.imputed = true;
    ds.fill = spec.fill;
    for (int w = 0; w < spec.n_waps; ++w) {
      std::snprintf(id, sizeof(id), "wap_%03d", w);
      ds.column_ids.emplace_back(id);
    }
    const auto n = static_cast<Eigen::Index>(rps.size()) * spec.samples_per_rp;
    ds.features.resize(n, spec.n_waps);
    ds.labels.resize(static_cast<std::size_t>(n));

    // Fresh noise stream per period, still derived from the base seed.
    Rng noise_rng(spec.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(period) + 1);
    const double bias = spec.drift_bias_dbm * period;
    Eigen::Index row = 0;
    for (std::size_t r = 0; r < rps.size(); ++r) {
      for (int s = 0; s < spec.samples_per_rp; ++s, ++row) {
        for (int w = 0; w < spec.n_waps; ++w) {
          double rssi = path_loss_rssi(spec.tx_power_dbm, spec.path_loss_exp,
                                       spec.ref_dist_m,
                                       dist3(rps[r], waps[static_cast<std::size_t>(w)]));
          rssi += bias + noise_rng.normal(0.0, spec.noise_sd_dbm);
          rssi = std::round(std::min(rssi, 0.0));
          ds.features(row, w) = rssi < spec.detect_floor_dbm ? spec.fill : rssi;
        }
        SampleLabel& lab = ds.labels[static_cast<std::size_t>(row)];
        lab.x = rps[r].x;
        lab.y = rps[r].y;
        lab.floor = spec.floor;
        lab.building = spec.building;
        lab.timestamp = static_cast<std::int64_t>(period) * 1000000 + row;
      }
    }
    out.push_back(std::move(ds));
  }
  return out;
}

std::vector<std::string> uji_style_column_ids(int w) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(w));
  char buf[16];
  for (int j = 0; j < w; ++j) {
    std::snprintf(buf, sizeof(buf), "WAP%03d", j + 1);
    ids.emplace_back(buf);
  }
  return ids;
}

FingerprintDataset gen_campus(const CampusSpec& spec) {
  if (spec.n_buildings < 1 ||
      static_cast<int>(spec.floors_per_building.size()) != spec.n_buildings) {
    throw std::invalid_argument("gen_campus: floors_per_building size mismatch");
  }

  struct FloorGeom {
    int building = 0;
    int floor = 0;
    std::vector<Point3> rps;
    std::vector<Point3> waps;  // global z encodes the floor
  };

  Rng rng(spec.seed);
  std::vector<FloorGeom> floors;
  int total_waps = 0;
  for (int b = 0; b < spec.n_buildings; ++b) {
    const double bx = spec.building_gap * b;
    const int nx = std::max(2, static_cast<int>(spec.footprint_x / spec.rp_spacing) + 1);
    const int ny = std::max(2, static_cast<int>(spec.footprint_y / spec.rp_spacing) + 1);
    for (int f = 0; f < spec.floors_per_building[static_cast<std::size_t>(b)]; ++f) {
      FloorGeom geom;
      geom.building = b;
      geom.floor = f;
      const double z = spec.floor_height * f;
      for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
          Point3 p;
          p.x = bx + spec.footprint_x * ix / (nx - 1) + rng.uniform(-0.2, 0.2);
          p.y = spec.footprint_y * iy / (ny - 1) + rng.uniform(-0.2, 0.2);
          p.z = z + 1.2;
          geom.rps.push_back(p);
        }
      }
      for (int w = 0; w < spec.waps_per_floor; ++w) {
        geom.waps.push_back({bx + rng.uniform(0.0, spec.footprint_x),
                             rng.uniform(0.0, spec.footprint_y), z + 2.7});
        ++total_waps;
      }
      floors.push_back(std::move(geom));
    }
  }

  // Flatten WAPs in floor order; remember each one's floor index for the
  // cross-floor attenuation term.
  struct WapRef {
    Point3 p;
    int building = 0;
    int floor = 0;
  };
  std::vector<WapRef> waps;
  waps.reserve(static_cast<std::size_t>(total_waps));
  for (const auto& geom : floors) {
    for (const auto& w : geom.waps) {
      waps.push_back({w, geom.building, geom.floor});
    }
  }

  Eigen::Index total_rows = 0;
  for (const auto& geom : floors) {
    total_rows += static_cast<Eigen::Index>(geom.rps.size()) * spec.samples_per_rp;
  }

  FingerprintDataset ds;
  ds.imputed = true;
  ds.fill = spec.fill;
  ds.column_ids = uji_style_column_ids(total_waps);
  ds.features.resize(total_rows, total_waps);
  ds.labels.resize(static_cast<std::size_t>(total_rows));

  Eigen::Index row = 0;
  for (const auto& geom : floors) {
    for (const auto& rp : geom.rps) {
      for (int s = 0; s < spec.samples_per_rp; ++s, ++row) {
        for (std::size_t w = 0; w < waps.size(); ++w) {
          const WapRef& wap = waps[w];
          double rssi = path_loss_rssi(spec.tx_power_dbm, spec.path_loss_exp,
                                       spec.ref_dist_m, dist3(rp, wap.p));
          rssi -= spec.cross_floor_atten_db * std::abs(geom.floor - wap.floor);
          if (wap.building != geom.building) rssi -= 20.0;  // exterior walls
          rssi += rng.normal(0.0, spec.noise_sd_dbm);
          rssi = std::round(std::min(rssi, 0.0));
          ds.features(row, static_cast<Eigen::Index>(w)) =
              rssi < spec.detect_floor_dbm ? spec.fill : rssi;
        }
        SampleLabel& lab = ds.labels[static_cast<std::size_t>(row)];
        lab.x = rp.x;
        lab.y = rp.y;
        lab.floor = geom.floor;
        lab.building = geom.building;
        lab.timestamp = row;
      }
    }
  }
  return ds;
}

}  // namespace sgploc
