#include "cigmvc/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string_view>

#include "json.hpp"

namespace cigmvc {

namespace fs = std::filesystem;

int MultiViewDataset::n_classes() const {
  if (!labels) return 0;
  return static_cast<int>(std::set<int>(labels->begin(), labels->end()).size());
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot write " + path.string());
  return out;
}

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace

std::optional<DatasetShape> reference_shape(const std::string& name) {
  static const std::vector<DatasetShape> shapes = {
      {"bbc", 685, 5, {4659, 4633, 4665, 4684}},
      {"ngs", 500, 5, {2000, 2000, 2000}},
      {"webkb", 203, 4, {1703, 230, 230}},
      {"100leaves", 1600, 100, {64, 64, 64}},
  };
  std::string key = name;
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char ch) { return std::tolower(ch); });
  for (const auto& s : shapes) {
    if (s.name == key) return s;
  }
  return std::nullopt;
}

DatasetManifest reference_manifest(const DatasetShape& shape, std::vector<fs::path> view_paths,
                                   std::optional<fs::path> label_path) {
  DatasetManifest m;
  m.name = shape.name;
  m.view_paths = std::move(view_paths);
  m.label_path = std::move(label_path);
  m.expected_n = shape.n;
  m.expected_c = shape.c;
  m.expected_dims = shape.dims;
  return m;
}

Matrix read_matrix_csv(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim(line);
    if (rest.empty()) continue;
    std::vector<double> row;
    int col = 0;
    while (true) {
      ++col;
      const auto comma = rest.find(',');
      const std::string_view cell = trim(rest.substr(0, comma));
      double value = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        throw DatasetError(path.string() + ":" + std::to_string(line_no) + ": column " + std::to_string(col) +
                           " is not a finite number: '" + std::string(cell) + "'");
      }
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DatasetError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                         std::to_string(rows.front().size()) + " columns, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DatasetError(path.string() + ": no data rows");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

void write_matrix_csv(const Matrix& m, const fs::path& path) {
  std::ofstream out = open_output(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Labels read_labels(const fs::path& path) {
  std::ifstream in = open_input(path);
  Labels labels;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view cell = trim(line);
    if (cell.empty()) continue;
    int value = 0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || value < 0) {
      throw DatasetError(path.string() + ":" + std::to_string(line_no) + ": not a nonnegative integer label: '" +
                         std::string(cell) + "'");
    }
    labels.push_back(value);
  }
  return labels;
}

void write_labels(const Labels& labels, const fs::path& path) {
  std::ofstream out = open_output(path);
  for (int l : labels) out << l << '\n';
}

DatasetManifest read_manifest(const fs::path& path) {
  if (!fs::exists(path)) throw DatasetError("manifest not found: " + path.string());
  std::ifstream in = open_input(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(path.string() + ": invalid manifest: " + e.what());
  }
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  DatasetManifest m;
  try {
    m.name = j.value("name", path.stem().string());
    for (const auto& v : j.at("views")) m.view_paths.push_back(resolve(v.get<std::string>()));
    if (j.contains("labels") && !j["labels"].is_null()) m.label_path = resolve(j["labels"].get<std::string>());
    if (j.contains("expected_n")) m.expected_n = j["expected_n"].get<int>();
    if (j.contains("expected_c")) m.expected_c = j["expected_c"].get<int>();
    if (j.contains("expected_dims")) m.expected_dims = j["expected_dims"].get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(path.string() + ": malformed manifest field: " + e.what());
  }
  if (m.view_paths.empty()) throw DatasetError(path.string() + ": manifest lists no views");
  return m;
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
  const fs::path base = path.parent_path();
  auto rel = [&](const fs::path& p) { return p.lexically_relative(base).generic_string(); };
  nlohmann::json j;
  j["name"] = manifest.name;
  j["views"] = nlohmann::json::array();
  for (const auto& v : manifest.view_paths) j["views"].push_back(rel(v));
  if (manifest.label_path) j["labels"] = rel(*manifest.label_path);
  if (manifest.expected_n) j["expected_n"] = *manifest.expected_n;
  if (manifest.expected_c) j["expected_c"] = *manifest.expected_c;
  if (!manifest.expected_dims.empty()) j["expected_dims"] = manifest.expected_dims;
  std::ofstream out = open_output(path);
  out << j.dump(2) << '\n';
}

MultiViewDataset load_dataset(const DatasetManifest& manifest) {
  for (const auto& p : manifest.view_paths) {
    if (!fs::exists(p)) throw DatasetError("view file not found: " + p.string());
  }
  if (manifest.label_path && !fs::exists(*manifest.label_path)) {
    throw DatasetError("label file not found: " + manifest.label_path->string());
  }
  MultiViewDataset data;
  data.name = manifest.name;
  for (std::size_t v = 0; v < manifest.view_paths.size(); ++v) {
    FeatureMatrix view{read_matrix_csv(manifest.view_paths[v]), static_cast<int>(v)};
    if (!data.views.empty() && view.data.rows() != data.views.front().data.rows()) {
      throw DatasetError(manifest.view_paths[v].string() + ": " + std::to_string(view.data.rows()) +
                         " rows, but " + manifest.view_paths.front().string() + " has " +
                         std::to_string(data.views.front().data.rows()));
    }
    data.views.push_back(std::move(view));
  }
  const int n = data.n_samples();
  if (manifest.label_path) {
    Labels labels = read_labels(*manifest.label_path);
    if (static_cast<int>(labels.size()) != n) {
      throw DatasetError(manifest.label_path->string() + ": " + std::to_string(labels.size()) +
                         " labels for " + std::to_string(n) + " samples");
    }
    data.labels = std::move(labels);
  }
  if (manifest.expected_n && *manifest.expected_n != n) {
    throw DatasetError(manifest.name + ": expected N=" + std::to_string(*manifest.expected_n) + ", loaded " +
                       std::to_string(n));
  }
  if (manifest.expected_c && data.labels && *manifest.expected_c != data.n_classes()) {
    throw DatasetError(manifest.name + ": expected C=" + std::to_string(*manifest.expected_c) + ", labels have " +
                       std::to_string(data.n_classes()) + " classes");
  }
  if (!manifest.expected_dims.empty()) {
    if (manifest.expected_dims.size() != data.views.size()) {
      throw DatasetError(manifest.name + ": expected_dims lists " + std::to_string(manifest.expected_dims.size()) +
                         " views, manifest has " + std::to_string(data.views.size()));
    }
    for (std::size_t v = 0; v < data.views.size(); ++v) {
      if (data.views[v].data.cols() != manifest.expected_dims[v]) {
        throw DatasetError(manifest.view_paths[v].string() + ": expected " +
                           std::to_string(manifest.expected_dims[v]) + " columns, found " +
                           std::to_string(data.views[v].data.cols()));
      }
    }
  }
  return data;
}

MultiViewDataset load_dataset(const fs::path& manifest_path) { return load_dataset(read_manifest(manifest_path)); }

fs::path save_dataset(const MultiViewDataset& data, const fs::path& dir) {
  fs::create_directories(dir);
  DatasetManifest m;
  m.name = data.name;
  for (const auto& view : data.views) {
    const fs::path p = dir / ("view_" + std::to_string(view.view_id) + ".csv");
    write_matrix_csv(view.data, p);
    m.view_paths.push_back(p);
    m.expected_dims.push_back(static_cast<int>(view.data.cols()));
  }
  m.expected_n = data.n_samples();
  if (data.labels) {
    m.label_path = dir / "labels.csv";
    write_labels(*data.labels, *m.label_path);
    m.expected_c = data.n_classes();
  }
  const fs::path manifest_path = dir / "manifest.json";
  write_manifest(m, manifest_path);
  return manifest_path;
}

MultiViewDataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_per_cluster < 1 || spec.n_clusters < 1 || spec.n_views < 1 || spec.dim < 1) {
    throw std::invalid_argument("generate_synthetic: all counts must be >= 1");
  }
  if (!(spec.noise_view_fraction >= 0.0 && spec.noise_view_fraction <= 1.0)) {
    throw std::invalid_argument("generate_synthetic: noise_view_fraction must lie in [0, 1]");
  }
  constexpr double kMinCenterDistance = 6.0;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = spec.n_per_cluster * spec.n_clusters;

  MultiViewDataset data;
  data.name = "synthetic";
  data.labels = Labels(n);
  for (int i = 0; i < n; ++i) (*data.labels)[i] = i / spec.n_per_cluster;

  for (int v = 0; v < spec.n_views; ++v) {
    // Rejection-sample centers in a box that widens after repeated failures.
    Matrix centers(spec.n_clusters, spec.dim);
    double half_width = kMinCenterDistance * spec.n_clusters;
    for (int c = 0; c < spec.n_clusters; ++c) {
      for (int attempt = 0;; ++attempt) {
        if (attempt > 0 && attempt % 1000 == 0) half_width *= 1.5;
        std::uniform_real_distribution<double> box(-half_width, half_width);
        for (int d = 0; d < spec.dim; ++d) centers(c, d) = box(rng);
        bool ok = true;
        for (int q = 0; q < c && ok; ++q) ok = (centers.row(c) - centers.row(q)).norm() >= kMinCenterDistance;
        if (ok) break;
      }
    }
    Matrix x(n, spec.dim);
    for (int i = 0; i < n; ++i) {
      for (int d = 0; d < spec.dim; ++d) x(i, d) = centers((*data.labels)[i], d) + gauss(rng);
    }
    if (v == kNoisyView && spec.noise_view_fraction > 0.0) {
      const int n_noisy = static_cast<int>(std::lround(spec.noise_view_fraction * n));
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      const Eigen::RowVectorXd lo = centers.colwise().minCoeff().array() - 3.0;
      const Eigen::RowVectorXd hi = centers.colwise().maxCoeff().array() + 3.0;
      for (int r = 0; r < n_noisy; ++r) {
        for (int d = 0; d < spec.dim; ++d) {
          std::uniform_real_distribution<double> box(lo(d), hi(d));
          x(order[r], d) = box(rng);
        }
      }
    }
    data.views.push_back(FeatureMatrix{std::move(x), v});
  }
  return data;
}

}  // namespace cigmvc
