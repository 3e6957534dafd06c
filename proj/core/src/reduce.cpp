#include "sgploc/reduce.hpp"

#include "sgploc/errors.hpp"
#include "sgploc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace sgploc {

namespace {

Eigen::VectorXd column_variances(const Eigen::MatrixXd& x) {
  const double n = static_cast<double>(x.rows());
  Eigen::VectorXd var(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double mean = x.col(j).mean();
    var(j) = (x.col(j).array() - mean).square().sum() / n;
  }
  return var;
}

}  // namespace

ColumnSelection wap_filter(const Eigen::MatrixXd& x, int target_v,
                           const WapFilterConfig& cfg) {
  const int w = static_cast<int>(x.cols());
  const Eigen::Index n = x.rows();
  if (n < 1) throw std::invalid_argument("wap_filter: empty matrix");
  if (target_v < 1 || target_v >= w) {
    throw std::out_of_range("wap_filter: target_v must be in [1, W)");
  }

  // Decreasing variance; stable sort keeps ties in ascending column order.
  const Eigen::VectorXd var = column_variances(x);
  std::vector<int> order(static_cast<std::size_t>(w));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&var](int a, int b) { return var(a) > var(b); });

  std::vector<int> survivors = order;
  std::size_t j = 0;
  while (j + 1 < survivors.size() &&
         static_cast<int>(survivors.size()) > target_v) {
    const int a = survivors[j];
    const int b = survivors[j + 1];
    const Eigen::ArrayXd delta = (x.col(a) - x.col(b)).array().abs();
    const double eta =
        static_cast<double>((delta <= cfg.similarity_threshold).count()) /
        static_cast<double>(n);
    if (eta == 1.0) {
      // Identical enough everywhere: keep the higher-variance column.
      survivors.erase(survivors.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    } else if (eta >= cfg.similarity_ratio) {
      // Drop whichever column is weaker where they differ the most.
      Eigen::Index k = 0;
      delta.maxCoeff(&k);
      const std::size_t victim = x(k, a) < x(k, b) ? j : j + 1;
      survivors.erase(survivors.begin() + static_cast<std::ptrdiff_t>(victim));
    } else {
      ++j;
    }
  }

  ColumnSelection sel;
  sel.kept = std::move(survivors);
  std::sort(sel.kept.begin(), sel.kept.end());
  sel.target_v = target_v;
  sel.achieved = static_cast<int>(sel.kept.size());
  return sel;
}

ColumnSelection drop_dead_columns(const FingerprintDataset& ds) {
  if (!ds.imputed) {
    throw std::invalid_argument("drop_dead_columns: dataset is not imputed");
  }
  ColumnSelection sel;
  for (Eigen::Index j = 0; j < ds.cols(); ++j) {
    if ((ds.features.col(j).array() != ds.fill).any()) {
      sel.kept.push_back(static_cast<int>(j));
    }
  }
  if (sel.kept.empty()) {
    throw std::invalid_argument("drop_dead_columns: every column is dead");
  }
  sel.target_v = static_cast<int>(sel.kept.size());
  sel.achieved = static_cast<int>(sel.kept.size());
  return sel;
}

Eigen::MatrixXd project_columns(const Eigen::MatrixXd& x, const ColumnSelection& sel) {
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(sel.kept.size()));
  for (std::size_t c = 0; c < sel.kept.size(); ++c) {
    out.col(static_cast<Eigen::Index>(c)) = x.col(sel.kept[c]);
  }
  return out;
}

Eigen::VectorXd project_columns(const Eigen::VectorXd& x, const ColumnSelection& sel) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(sel.kept.size()));
  for (std::size_t c = 0; c < sel.kept.size(); ++c) {
    out(static_cast<Eigen::Index>(c)) = x(sel.kept[c]);
  }
  return out;
}

ColumnSelection compose(const ColumnSelection& outer, const ColumnSelection& inner) {
  ColumnSelection sel;
  sel.kept.reserve(inner.kept.size());
  for (int idx : inner.kept) {
    sel.kept.push_back(outer.kept.at(static_cast<std::size_t>(idx)));
  }
  sel.target_v = inner.target_v;
  sel.achieved = inner.achieved;
  return sel;
}

void GridSpec::validate() const {
  if (!(cell_size > 0.0)) throw std::invalid_argument("GridSpec: cell_size must be > 0");
  if (max_per_cell < 1) throw std::invalid_argument("GridSpec: max_per_cell must be >= 1");
}

namespace {

std::pair<std::int64_t, std::int64_t> cell_of(const SampleLabel& lab,
                                              const GridSpec& grid) {
  return {static_cast<std::int64_t>(std::floor((lab.x - grid.origin_x) / grid.cell_size)),
          static_cast<std::int64_t>(std::floor((lab.y - grid.origin_y) / grid.cell_size))};
}

std::map<std::pair<std::int64_t, std::int64_t>, std::vector<Eigen::Index>>
bucket_rows(const FingerprintDataset& ds, const GridSpec& grid) {
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<Eigen::Index>> cells;
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    cells[cell_of(ds.labels[i], grid)].push_back(i);
  }
  return cells;
}

}  // namespace

std::vector<Eigen::Index> select_inducing(const FingerprintDataset& ds,
                                          const GridSpec& grid) {
  grid.validate();
  if (ds.empty()) throw std::invalid_argument("select_inducing: empty dataset");

  // std::map iteration order makes the RNG consumption deterministic.
  auto cells = bucket_rows(ds, grid);
  Rng rng(grid.seed);
  std::vector<Eigen::Index> selected;
  for (auto& [cell, rows] : cells) {
    if (static_cast<int>(rows.size()) > grid.max_per_cell) {
      // Partial Fisher-Yates: the first max_per_cell slots become a uniform
      // sample without replacement.
      for (int s = 0; s < grid.max_per_cell; ++s) {
        const std::size_t pick =
            static_cast<std::size_t>(s) +
            static_cast<std::size_t>(rng.below(rows.size() - static_cast<std::size_t>(s)));
        std::swap(rows[static_cast<std::size_t>(s)], rows[pick]);
      }
      rows.resize(static_cast<std::size_t>(grid.max_per_cell));
    }
    selected.insert(selected.end(), rows.begin(), rows.end());
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

int count_occupied_cells(const FingerprintDataset& ds, const GridSpec& grid) {
  return static_cast<int>(bucket_rows(ds, grid).size());
}

GridSpec sparsity_to_grid(const FingerprintDataset& ds, double target_sparsity,
                          double cell_size, std::uint64_t seed) {
  if (!(target_sparsity > 0.0 && target_sparsity <= 100.0)) {
    throw std::invalid_argument("sparsity_to_grid: target must be in (0, 100]");
  }
  if (ds.empty()) throw std::invalid_argument("sparsity_to_grid: empty dataset");

  GridSpec grid;
  grid.cell_size = cell_size;
  grid.seed = seed;
  grid.origin_x = ds.labels[0].x;
  grid.origin_y = ds.labels[0].y;
  for (const auto& lab : ds.labels) {
    grid.origin_x = std::min(grid.origin_x, lab.x);
    grid.origin_y = std::min(grid.origin_y, lab.y);
  }
  grid.max_per_cell = 1;
  const int occupied = count_occupied_cells(ds, grid);
  const double per_cell = target_sparsity / 100.0 *
                          static_cast<double>(ds.rows()) /
                          static_cast<double>(occupied);
  grid.max_per_cell = std::max(1, static_cast<int>(std::llround(per_cell)));
  return grid;
}

}  // namespace sgploc
