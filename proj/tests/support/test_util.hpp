#pragma once

#include <sgploc/dataset.hpp>
#include <sgploc/rng.hpp>

#include <Eigen/Core>

#include <cstdlib>
#include <filesystem>
#include <string>

namespace sgploc::testing {

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng,
                                     double lo = -90.0, double hi = -30.0) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
  }
  return m;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, Rng& rng, double lo = 0.0,
                                     double hi = 50.0) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

// Random imputed dataset with coordinates in a small area; good enough for
// plumbing tests that do not care about radio realism.
inline FingerprintDataset random_dataset(Eigen::Index rows, Eigen::Index cols,
                                         Rng& rng, int building = 0, int floor = 0) {
  FingerprintDataset ds;
  ds.features = random_matrix(rows, cols, rng);
  for (Eigen::Index j = 0; j < cols; ++j) {
    ds.column_ids.push_back("wap_" + std::to_string(j));
  }
  ds.imputed = true;
  ds.fill = kDefaultFill;
  ds.labels.resize(static_cast<std::size_t>(rows));
  for (auto& lab : ds.labels) {
    lab.x = rng.uniform(0.0, 40.0);
    lab.y = rng.uniform(0.0, 40.0);
    lab.floor = floor;
    lab.building = building;
    lab.timestamp = 0;
  }
  return ds;
}

class TempDir {
public:
  TempDir() {
    auto pattern = std::filesystem::temp_directory_path() / "sgploc_test_XXXXXX";
    std::string s = pattern.string();
    if (::mkdtemp(s.data()) == nullptr) std::abort();
    path_ = s;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::string& path() const { return path_; }
  std::string file(const std::string& name) const { return path_ + "/" + name; }

private:
  std::string path_;
};

}  // namespace sgploc::testing
