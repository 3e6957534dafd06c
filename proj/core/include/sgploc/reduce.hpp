#pragma once

#include "sgploc/dataset.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace sgploc {

// Result of a column-reduction pass. kept holds surviving column indices
// into the matrix the pass ran on, in ascending order.
struct ColumnSelection {
  std::vector<int> kept;
  int target_v = 0;
  int achieved = 0;
};

struct WapFilterConfig {
  double similarity_threshold = 3.0;  // dBm difference counted as "similar"
  double similarity_ratio = 0.85;     // fraction of similar entries that triggers removal
};

// Variance-ordered adjacent-pair similarity scan. Columns are sorted by
// decreasing variance (ties by ascending index); for each surviving adjacent
// pair, eta = fraction of |col_j - col_j+1| entries <= similarity_threshold.
// eta == 1 drops the lower-variance member; eta >= similarity_ratio drops
// whichever column is weaker at the largest difference (first index on
// ties). After a removal the survivor is compared against the next column.
// The scan stops once target_v columns remain; it may finish above target_v
// if it runs out of pairs.
ColumnSelection wap_filter(const Eigen::MatrixXd& x, int target_v,
                           const WapFilterConfig& cfg = {});

// Drops columns never detected on this floor (all entries equal to the
// imputation fill). Runs before wap_filter. Throws if nothing survives.
ColumnSelection drop_dead_columns(const FingerprintDataset& ds);

// Keep only the selected columns.
Eigen::MatrixXd project_columns(const Eigen::MatrixXd& x, const ColumnSelection& sel);
Eigen::VectorXd project_columns(const Eigen::VectorXd& x, const ColumnSelection& sel);

// Composition: outer selected from the original, inner selected from the
// projected matrix. Result indexes into the original.
ColumnSelection compose(const ColumnSelection& outer, const ColumnSelection& inner);

// Rectangular grid over RP coordinates with a per-cell cap.
struct GridSpec {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double cell_size = 5.0;   // meters
  int max_per_cell = 1;     // rows kept per occupied cell
  std::uint64_t seed = 1;

  void validate() const;
};

// Buckets rows by grid cell and randomly downsamples each cell to at most
// max_per_cell rows. Deterministic for a fixed seed; returned indices are
// ascending and unique, |result| <= min(N, cells * max_per_cell).
std::vector<Eigen::Index> select_inducing(const FingerprintDataset& ds,
                                          const GridSpec& grid);

// Derives a grid whose per-cell cap aims at target_sparsity percent of the
// rows: max_per_cell = max(1, round(target/100 * N / occupied_cells)).
// Achieved sparsity can deviate by the cell-occupancy granularity.
GridSpec sparsity_to_grid(const FingerprintDataset& ds, double target_sparsity,
                          double cell_size, std::uint64_t seed);

// Occupied-cell count for a dataset under the given origin and cell size.
int count_occupied_cells(const FingerprintDataset& ds, const GridSpec& grid);

}  // namespace sgploc
