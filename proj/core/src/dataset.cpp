#include "sgploc/dataset.hpp"

#include "sgploc/errors.hpp"
#include "sgploc/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string_view>

namespace sgploc {

namespace {

std::string read_whole_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string_view> split_lines(const std::string& text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

double parse_cell(std::string_view cell, const std::string& path,
                  std::size_t line_no, const std::string& column) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": column '" +
                     column + "': cannot parse '" + std::string(cell) +
                     "' as a number");
  }
  return value;
}

int find_column(const std::vector<std::string_view>& header, std::string_view name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

void check_unique_ids(const std::vector<std::string>& ids, const std::string& path) {
  std::set<std::string_view> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw ParseError(path + ": duplicate WAP column id '" + id + "'");
    }
  }
}

struct MetaColumns {
  int x = -1, y = -1, floor = -1, building = -1, timestamp = -1;
  int wap_count = 0;
};

FingerprintDataset load_table(const std::string& path, double fill,
                              const std::vector<std::string_view>& lines,
                              const MetaColumns& meta) {
  const auto header = split_csv(lines[0]);
  const std::size_t n_cols = header.size();
  const int w = meta.wap_count;
  const Eigen::Index n = static_cast<Eigen::Index>(lines.size()) - 1;
  if (n < 1) throw ParseError(path + ": no data rows");

  FingerprintDataset ds;
  ds.column_ids.reserve(w);
  for (int j = 0; j < w; ++j) ds.column_ids.emplace_back(header[j]);
  check_unique_ids(ds.column_ids, path);

  ds.features.resize(n, w);
  ds.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t line_no = static_cast<std::size_t>(i) + 2;
    const auto cells = split_csv(lines[i + 1]);
    if (cells.size() != n_cols) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(n_cols) + " cells, got " +
                       std::to_string(cells.size()));
    }
    for (int j = 0; j < w; ++j) {
      // Empty cell means the WAP was not detected.
      double v = cells[j].empty()
                     ? kMissingSentinel
                     : parse_cell(cells[j], path, line_no, ds.column_ids[j]);
      ds.features(i, j) = v;
    }
    SampleLabel& lab = ds.labels[i];
    lab.x = parse_cell(cells[meta.x], path, line_no, std::string(header[meta.x]));
    lab.y = parse_cell(cells[meta.y], path, line_no, std::string(header[meta.y]));
    lab.floor = static_cast<int>(
        parse_cell(cells[meta.floor], path, line_no, std::string(header[meta.floor])));
    lab.building = static_cast<int>(parse_cell(cells[meta.building], path, line_no,
                                               std::string(header[meta.building])));
    lab.timestamp =
        meta.timestamp >= 0
            ? static_cast<std::int64_t>(parse_cell(
                  cells[meta.timestamp], path, line_no, std::string(header[meta.timestamp])))
            : 0;
  }

  impute(ds, fill);
  return ds;
}

}  // namespace

FingerprintDataset load_uji(const std::string& path, double fill) {
  const std::string text = read_whole_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(path + ": empty file");
  const auto header = split_csv(lines[0]);

  MetaColumns meta;
  meta.x = find_column(header, "LONGITUDE");
  meta.y = find_column(header, "LATITUDE");
  meta.floor = find_column(header, "FLOOR");
  meta.building = find_column(header, "BUILDINGID");
  meta.timestamp = find_column(header, "TIMESTAMP");
  for (auto [idx, name] : {std::pair{meta.x, "LONGITUDE"},
                           std::pair{meta.y, "LATITUDE"},
                           std::pair{meta.floor, "FLOOR"},
                           std::pair{meta.building, "BUILDINGID"}}) {
    if (idx < 0) throw ParseError(path + ": header lacks required column " + name);
  }
  // WAP columns precede the metadata block.
  meta.wap_count = meta.x;
  if (meta.wap_count < 1) throw ParseError(path + ": no WAP columns before LONGITUDE");
  return load_table(path, fill, lines, meta);
}

FingerprintDataset load_generic(const std::string& path, double fill) {
  const std::string text = read_whole_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(path + ": empty file");
  const auto header = split_csv(lines[0]);

  MetaColumns meta;
  meta.x = find_column(header, "x");
  meta.y = find_column(header, "y");
  meta.floor = find_column(header, "floor");
  meta.building = find_column(header, "building");
  meta.timestamp = find_column(header, "timestamp");
  for (auto [idx, name] : {std::pair{meta.x, "x"}, std::pair{meta.y, "y"},
                           std::pair{meta.floor, "floor"},
                           std::pair{meta.building, "building"}}) {
    if (idx < 0) throw ParseError(path + ": header lacks required column " + name);
  }
  meta.wap_count = meta.x;
  if (meta.wap_count < 1) throw ParseError(path + ": no WAP columns before x");
  return load_table(path, fill, lines, meta);
}

FingerprintDataset load_auto(const std::string& path, double fill) {
  const std::string text = read_whole_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(path + ": empty file");
  const auto header = split_csv(lines[0]);
  if (find_column(header, "LONGITUDE") >= 0) return load_uji(path, fill);
  return load_generic(path, fill);
}

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  // 17 significant digits round-trip any IEEE-754 double.
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  out.append(buf, static_cast<std::size_t>(len));
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << contents;
  if (!out) throw ParseError(path + ": write failed");
}

}  // namespace

void save_generic(const FingerprintDataset& ds, const std::string& path) {
  std::string out;
  out.reserve(static_cast<std::size_t>(ds.rows()) * (ds.cols() + 5) * 8);
  for (const auto& id : ds.column_ids) {
    out += id;
    out += ',';
  }
  out += "x,y,floor,building,timestamp\n";
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.cols(); ++j) {
      append_double(out, ds.features(i, j));
      out += ',';
    }
    const SampleLabel& lab = ds.labels[i];
    append_double(out, lab.x);
    out += ',';
    append_double(out, lab.y);
    out += ',';
    out += std::to_string(lab.floor);
    out += ',';
    out += std::to_string(lab.building);
    out += ',';
    out += std::to_string(lab.timestamp);
    out += '\n';
  }
  write_file(path, out);
}

void save_uji(const FingerprintDataset& ds, const std::string& path) {
  std::string out;
  out.reserve(static_cast<std::size_t>(ds.rows()) * (ds.cols() + 9) * 5);
  for (const auto& id : ds.column_ids) {
    out += id;
    out += ',';
  }
  out +=
      "LONGITUDE,LATITUDE,FLOOR,BUILDINGID,SPACEID,RELATIVEPOSITION,USERID,"
      "PHONEID,TIMESTAMP\n";
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.cols(); ++j) {
      const double v = ds.features(i, j);
      // Undetected WAPs go back to the sentinel.
      append_double(out, ds.imputed && v == ds.fill ? kMissingSentinel : v);
      out += ',';
    }
    const SampleLabel& lab = ds.labels[i];
    append_double(out, lab.x);
    out += ',';
    append_double(out, lab.y);
    out += ',';
    out += std::to_string(lab.floor);
    out += ',';
    out += std::to_string(lab.building);
    out += ",0,0,0,0,";
    out += std::to_string(lab.timestamp);
    out += '\n';
  }
  write_file(path, out);
}

void impute(FingerprintDataset& ds, double fill) {
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.cols(); ++j) {
      if (ds.features(i, j) == kMissingSentinel) ds.features(i, j) = fill;
    }
  }
  ds.imputed = true;
  ds.fill = fill;
}

void minmax_normalize(FingerprintDataset& ds) {
  const double lo = ds.features.minCoeff();
  const double hi = ds.features.maxCoeff();
  if (hi <= lo) return;
  ds.features = (ds.features.array() - lo) / (hi - lo);
  ds.fill = (ds.fill - lo) / (hi - lo);
}

FingerprintDataset subset(const FingerprintDataset& ds, int building, int floor) {
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    if (ds.labels[i].building == building && ds.labels[i].floor == floor) {
      rows.push_back(i);
    }
  }
  FingerprintDataset out;
  out.column_ids = ds.column_ids;
  out.imputed = ds.imputed;
  out.fill = ds.fill;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), ds.cols());
  out.labels.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.features.row(static_cast<Eigen::Index>(r)) = ds.features.row(rows[r]);
    out.labels.push_back(ds.labels[rows[r]]);
  }
  return out;
}

std::vector<int> buildings_in(const FingerprintDataset& ds) {
  std::set<int> s;
  for (const auto& lab : ds.labels) s.insert(lab.building);
  return {s.begin(), s.end()};
}

std::vector<int> floors_in(const FingerprintDataset& ds, int building) {
  std::set<int> s;
  for (const auto& lab : ds.labels) {
    if (lab.building == building) s.insert(lab.floor);
  }
  return {s.begin(), s.end()};
}

FingerprintDataset concat(const FingerprintDataset& a, const FingerprintDataset& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.column_ids != b.column_ids) {
    throw std::invalid_argument("concat: column ids differ");
  }
  if (a.imputed != b.imputed || a.fill != b.fill) {
    throw std::invalid_argument("concat: imputation state differs");
  }
  FingerprintDataset out;
  out.column_ids = a.column_ids;
  out.imputed = a.imputed;
  out.fill = a.fill;
  out.features.resize(a.rows() + b.rows(), a.cols());
  out.features.topRows(a.rows()) = a.features;
  out.features.bottomRows(b.rows()) = b.features;
  out.labels = a.labels;
  out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
  return out;
}

namespace {

FingerprintDataset take_rows(const FingerprintDataset& ds,
                             const std::vector<Eigen::Index>& rows) {
  FingerprintDataset out;
  out.column_ids = ds.column_ids;
  out.imputed = ds.imputed;
  out.fill = ds.fill;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), ds.cols());
  out.labels.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.features.row(static_cast<Eigen::Index>(r)) = ds.features.row(rows[r]);
    out.labels.push_back(ds.labels[rows[r]]);
  }
  return out;
}

}  // namespace

SplitResult split_temporal(const FingerprintDataset& ds, std::int64_t boundary) {
  std::vector<Eigen::Index> train_rows, test_rows;
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    (ds.labels[i].timestamp < boundary ? train_rows : test_rows).push_back(i);
  }
  if (train_rows.empty()) {
    throw std::invalid_argument("temporal split: train side is empty");
  }
  if (test_rows.empty()) {
    throw std::invalid_argument("temporal split: test side is empty");
  }
  return {take_rows(ds, train_rows), take_rows(ds, test_rows)};
}

SplitResult split_random(const FingerprintDataset& ds, double train_fraction,
                         std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("random split: fraction must be in (0,1)");
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(ds.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(seed);
  rng.shuffle(order);
  const auto n_train = static_cast<std::size_t>(
      std::floor(static_cast<double>(ds.rows()) * train_fraction));
  std::vector<Eigen::Index> train_rows(order.begin(), order.begin() + n_train);
  std::vector<Eigen::Index> test_rows(order.begin() + n_train, order.end());
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {take_rows(ds, train_rows), take_rows(ds, test_rows)};
}

}  // namespace sgploc
