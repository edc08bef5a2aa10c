#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cigmvc/types.hpp"

namespace cigmvc {

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MultiViewDataset {
  std::string name;
  std::vector<FeatureMatrix> views;
  std::optional<Labels> labels;

  int n_samples() const { return views.empty() ? 0 : static_cast<int>(views.front().data.rows()); }
  int n_views() const { return static_cast<int>(views.size()); }
  /// Number of distinct ground-truth labels, 0 without labels.
  int n_classes() const;
};

/// Paths are resolved relative to the manifest file's directory.
struct DatasetManifest {
  std::string name;
  std::vector<std::filesystem::path> view_paths;
  std::optional<std::filesystem::path> label_path;
  std::optional<int> expected_n;
  std::optional<int> expected_c;
  std::vector<int> expected_dims;
};

/// Published shape of a benchmark dataset.
struct DatasetShape {
  std::string name;
  int n = 0;
  int c = 0;
  std::vector<int> dims;
};

/// Shapes of the BBC, NGs, WebKB and 100leaves benchmarks (case-insensitive
/// lookup by name); std::nullopt for anything else.
std::optional<DatasetShape> reference_shape(const std::string& name);

/// Manifest pre-filled with a reference shape's expectations.
DatasetManifest reference_manifest(const DatasetShape& shape, std::vector<std::filesystem::path> view_paths,
                                   std::optional<std::filesystem::path> label_path);

DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Headerless comma-separated numeric matrix, one row per sample.
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);

/// One 0-based integer label per line.
Labels read_labels(const std::filesystem::path& path);
void write_labels(const Labels& labels, const std::filesystem::path& path);

MultiViewDataset load_dataset(const DatasetManifest& manifest);
MultiViewDataset load_dataset(const std::filesystem::path& manifest_path);

/// Writes view_<v>.csv, labels.csv and manifest.json into `dir`; returns the
/// manifest path.
std::filesystem::path save_dataset(const MultiViewDataset& data, const std::filesystem::path& dir);

struct SyntheticSpec {
  int n_per_cluster = 50;
  int n_clusters = 3;
  int n_views = 3;
  int dim = 5;
  double noise_view_fraction = 0.0;
  std::uint64_t seed = 0;
};

/// Index of the view that receives the injected inconsistent samples.
inline constexpr int kNoisyView = 0;

/// Gaussian blobs (unit variance) around per-view centers at least 6 apart.
/// In view kNoisyView a noise_view_fraction share of samples is replaced by
/// draws from a uniform box that ignores cluster membership.
MultiViewDataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace cigmvc
