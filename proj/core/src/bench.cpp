#include "sgploc/bench.hpp"

#include "sgploc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sgploc {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double knn_mean_error(const FingerprintDataset& train, int k,
                      const FingerprintDataset& test) {
  KnnConfig cfg{k};
  std::vector<double> errors;
  errors.reserve(static_cast<std::size_t>(test.rows()));
  for (Eigen::Index i = 0; i < test.rows(); ++i) {
    const auto [x, y] = knn_regress(train, cfg, test.features.row(i));
    const auto& lab = test.labels[static_cast<std::size_t>(i)];
    errors.push_back(std::hypot(x - lab.x, y - lab.y));
  }
  return mean_of(errors);
}

}  // namespace

std::vector<BenchRow> run_bench(const FingerprintDataset& train,
                                const FingerprintDataset& test,
                                const std::vector<double>& sparsity_levels,
                                const TrainOptions& opts, int knn_k, int repeats) {
  if (repeats < 1) throw std::invalid_argument("run_bench: repeats must be >= 1");
  std::vector<BenchRow> rows;

  auto timed_fit = [&](const TrainOptions& o) {
    std::vector<double> times;
    FloorLocalizer loc;
    for (int r = 0; r < repeats; ++r) {
      loc = train_floor(train, o);
      times.push_back(loc.fit_seconds);
    }
    return std::pair{std::move(loc), median(times)};
  };

  {
    TrainOptions o = opts;
    o.exact = true;
    auto [loc, fit_s] = timed_fit(o);
    rows.push_back({"gp", mean_of(localization_errors_2d(loc, test)), fit_s, 100.0});
  }
  char name[32];
  for (double level : sparsity_levels) {
    TrainOptions o = opts;
    o.exact = false;
    o.target_sparsity = level;
    auto [loc, fit_s] = timed_fit(o);
    std::snprintf(name, sizeof(name), "sgp-ri-%g", level);
    rows.push_back({name, mean_of(localization_errors_2d(loc, test)), fit_s,
                    loc.sparsity_pct});
  }
  // k-NN keeps the raw table as its model; there is nothing to fit.
  rows.push_back({"knn", knn_mean_error(train, knn_k, test), 0.0, 0.0});
  return rows;
}

void save_bench_csv(const std::vector<BenchRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << "model,mean_2d_m,fit_seconds,sparsity_pct\n";
  char buf[128];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g\n", row.model.c_str(),
                  row.mean_2d, row.fit_seconds, row.sparsity);
    out << buf;
  }
}

std::vector<double> run_dynamic(const DynamicScenario& scenario,
                                const TrainOptions& opts, ModelKind kind,
                                int knn_k) {
  if (scenario.groups.empty()) {
    throw std::invalid_argument("run_dynamic: need at least one test period");
  }
  for (const auto& g : scenario.groups) {
    if (g.empty()) throw std::invalid_argument("run_dynamic: empty test period");
  }

  FingerprintDataset current = scenario.initial_train;
  TrainOptions o = opts;
  o.exact = kind == ModelKind::kExactGp;

  FloorLocalizer loc;
  if (kind != ModelKind::kKnn) loc = train_floor(current, o);

  std::vector<double> errors;
  errors.reserve(scenario.groups.size());
  for (std::size_t g = 0; g < scenario.groups.size(); ++g) {
    const FingerprintDataset& group = scenario.groups[g];
    if (kind == ModelKind::kKnn) {
      errors.push_back(knn_mean_error(current, knn_k, group));
    } else {
      errors.push_back(mean_of(localization_errors_2d(loc, group)));
    }
    if (scenario.retrain && g + 1 < scenario.groups.size()) {
      current = concat(current, group);
      if (kind != ModelKind::kKnn) loc = train_floor(current, o);
    }
  }
  return errors;
}

}  // namespace sgploc
