#include <cstring>
#include <fstream>
#include <random>

#include "doctest.h"

#include "cigmvc/dataset_io.hpp"
#include "cigmvc/graph_construction.hpp"
#include "cigmvc/metrics.hpp"
#include "oracles/oracles.hpp"

using namespace cigmvc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("cigmvc_test_" + tag + "_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

template <typename Fn>
std::string error_of(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

void write_zero_view(const fs::path& p, int rows, int cols) {
  std::string line;
  for (int c = 0; c < cols; ++c) line += c == 0 ? "0" : ",0";
  line += '\n';
  std::ofstream out(p);
  for (int r = 0; r < rows; ++r) out << line;
}

}  // namespace

TEST_CASE("save then load reproduces matrices bit-exactly") {
  TempDir dir("roundtrip");
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<std::uint64_t> bits;
  MultiViewDataset data;
  data.name = "random";
  for (int v = 0; v < 3; ++v) {
    Matrix m(7, 2 + v);
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) {
        double x;
        do {
          const std::uint64_t b = bits(rng);
          std::memcpy(&x, &b, sizeof x);
        } while (!std::isfinite(x));
        m(i, j) = x;
      }
    }
    data.views.push_back(FeatureMatrix{m, v});
  }
  data.labels = Labels{0, 1, 2, 0, 1, 2, 2};
  const fs::path manifest = save_dataset(data, dir.path / "ds");
  const MultiViewDataset back = load_dataset(manifest);
  REQUIRE(back.n_views() == 3);
  for (int v = 0; v < 3; ++v) {
    const Matrix& a = data.views[v].data;
    const Matrix& b = back.views[v].data;
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
  }
  CHECK(*back.labels == *data.labels);
  CHECK(back.name == "random");
  CHECK(back.n_classes() == 3);
}

TEST_CASE("loader rejects views that disagree on N") {
  TempDir dir("mismatch");
  write_text(dir.path / "a.csv", "1,2\n3,4\n5,6\n");
  write_text(dir.path / "b.csv", "1\n2\n");
  write_text(dir.path / "m.json", R"({"name": "bad", "views": ["a.csv", "b.csv"]})");
  const std::string err = error_of([&] { load_dataset(dir.path / "m.json"); });
  CHECK(err.find("b.csv") != std::string::npos);
}

TEST_CASE("label count mismatch names the label file") {
  TempDir dir("labels");
  write_text(dir.path / "v0.csv", "1\n2\n3\n4\n5\n");
  write_text(dir.path / "v1.csv", "1,0\n2,0\n3,0\n4,0\n5,0\n");
  write_text(dir.path / "truth.csv", "0\n0\n1\n1\n");
  write_text(dir.path / "m.json", R"({"views": ["v0.csv", "v1.csv"], "labels": "truth.csv"})");
  const std::string err = error_of([&] { load_dataset(dir.path / "m.json"); });
  CHECK(err.find("truth.csv") != std::string::npos);
}

TEST_CASE("malformed inputs produce file and row diagnostics") {
  TempDir dir("malformed");
  write_text(dir.path / "text.csv", "1,2\n3,abc\n");
  std::string err = error_of([&] { read_matrix_csv(dir.path / "text.csv"); });
  CHECK(err.find("text.csv:2") != std::string::npos);
  CHECK(err.find("column 2") != std::string::npos);

  write_text(dir.path / "ragged.csv", "1,2\n3\n");
  err = error_of([&] { read_matrix_csv(dir.path / "ragged.csv"); });
  CHECK(err.find("ragged.csv:2") != std::string::npos);

  write_text(dir.path / "nan.csv", "1,nan\n");
  CHECK_THROWS_AS(read_matrix_csv(dir.path / "nan.csv"), DatasetError);

  write_text(dir.path / "neg.csv", "0\n-1\n");
  err = error_of([&] { read_labels(dir.path / "neg.csv"); });
  CHECK(err.find("neg.csv:2") != std::string::npos);

  err = error_of([&] { read_manifest(dir.path / "absent.json"); });
  CHECK(err.find("absent.json") != std::string::npos);

  write_text(dir.path / "m.json", R"({"views": ["missing.csv"]})");
  err = error_of([&] { load_dataset(dir.path / "m.json"); });
  CHECK(err.find("missing.csv") != std::string::npos);

  write_text(dir.path / "empty.json", R"({"views": []})");
  CHECK_THROWS_AS(read_manifest(dir.path / "empty.json"), DatasetError);
  write_text(dir.path / "junk.json", "{not json");
  CHECK_THROWS_AS(read_manifest(dir.path / "junk.json"), DatasetError);
}

TEST_CASE("expected shapes are enforced") {
  TempDir dir("expected");
  write_text(dir.path / "v.csv", "1,2\n3,4\n5,6\n");
  write_text(dir.path / "l.csv", "0\n1\n1\n");
  write_text(dir.path / "n.json", R"({"views": ["v.csv"], "labels": "l.csv", "expected_n": 4})");
  CHECK_THROWS_AS(load_dataset(dir.path / "n.json"), DatasetError);
  write_text(dir.path / "c.json", R"({"views": ["v.csv"], "labels": "l.csv", "expected_c": 3})");
  CHECK_THROWS_AS(load_dataset(dir.path / "c.json"), DatasetError);
  write_text(dir.path / "d.json", R"({"views": ["v.csv"], "expected_dims": [3]})");
  CHECK_THROWS_AS(load_dataset(dir.path / "d.json"), DatasetError);
  write_text(dir.path / "ok.json",
             R"({"views": ["v.csv"], "labels": "l.csv", "expected_n": 3, "expected_c": 2, "expected_dims": [2]})");
  CHECK(load_dataset(dir.path / "ok.json").n_samples() == 3);
}

TEST_CASE("reference benchmark shapes") {
  const auto webkb = reference_shape("WebKB");
  REQUIRE(webkb);
  CHECK(webkb->n == 203);
  CHECK(webkb->c == 4);
  CHECK(webkb->dims == std::vector<int>{1703, 230, 230});
  const auto bbc = reference_shape("bbc");
  REQUIRE(bbc);
  CHECK(bbc->n == 685);
  CHECK(bbc->c == 5);
  CHECK(bbc->dims == std::vector<int>{4659, 4633, 4665, 4684});
  CHECK(reference_shape("ngs")->dims.size() == 3);
  CHECK(reference_shape("100leaves")->c == 100);
  CHECK_FALSE(reference_shape("mnist"));
}

TEST_CASE("WebKB- and BBC-shaped manifests load with their published shapes") {
  TempDir dir("reference");
  for (const char* name : {"webkb", "bbc"}) {
    const DatasetShape shape = *reference_shape(name);
    std::vector<fs::path> views;
    for (std::size_t v = 0; v < shape.dims.size(); ++v) {
      views.push_back(dir.path / (std::string(name) + "_view" + std::to_string(v) + ".csv"));
      write_zero_view(views.back(), shape.n, shape.dims[v]);
    }
    Labels labels(shape.n);
    for (int i = 0; i < shape.n; ++i) labels[i] = i % shape.c;
    const fs::path label_path = dir.path / (std::string(name) + "_labels.csv");
    write_labels(labels, label_path);
    const fs::path manifest_path = dir.path / (std::string(name) + ".json");
    write_manifest(reference_manifest(shape, views, label_path), manifest_path);

    const MultiViewDataset data = load_dataset(manifest_path);
    CHECK(data.n_samples() == shape.n);
    CHECK(data.n_views() == static_cast<int>(shape.dims.size()));
    CHECK(data.n_classes() == shape.c);
    for (std::size_t v = 0; v < shape.dims.size(); ++v) CHECK(data.views[v].data.cols() == shape.dims[v]);
  }
}

TEST_CASE("synthetic generator is deterministic") {
  const SyntheticSpec spec{10, 3, 2, 4, 0.3, 77};
  const auto a = generate_synthetic(spec);
  const auto b = generate_synthetic(spec);
  for (int v = 0; v < 2; ++v) {
    CHECK(std::memcmp(a.views[v].data.data(), b.views[v].data.data(), sizeof(double) * a.views[v].data.size()) == 0);
  }
  CHECK(*a.labels == *b.labels);
  SyntheticSpec other = spec;
  other.seed = 78;
  CHECK(generate_synthetic(other).views[0].data != a.views[0].data);
}

TEST_CASE("synthetic generator with one cluster") {
  const auto d = generate_synthetic(SyntheticSpec{8, 1, 2, 3, 0.0, 1});
  CHECK(*d.labels == Labels(8, 0));
  CHECK(d.n_samples() == 8);
}

TEST_CASE("noise replaces exactly the requested share of samples in one view") {
  const SyntheticSpec clean{20, 3, 3, 5, 0.0, 5};
  SyntheticSpec noisy = clean;
  noisy.noise_view_fraction = 0.3;
  const auto a = generate_synthetic(clean);
  const auto b = generate_synthetic(noisy);
  int changed = 0;
  for (int i = 0; i < a.n_samples(); ++i) changed += a.views[kNoisyView].data.row(i) != b.views[kNoisyView].data.row(i);
  CHECK(changed == 18);
  CHECK_THROWS_AS(generate_synthetic(SyntheticSpec{5, 2, 2, 2, 1.5, 0}), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic(SyntheticSpec{0, 2, 2, 2, 0.0, 0}), std::invalid_argument);
}

TEST_CASE("noise-free synthetic views are separable by single-view spectral clustering") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto d = generate_synthetic(SyntheticSpec{50, 3, 3, 5, 0.0, seed});
    for (const auto& view : d.views) {
      const Matrix w = build_sig(view, 15).weights;
      CHECK(accuracy(oracles::single_view_spectral(w, 3), *d.labels) >= 0.95);
    }
    // Cluster centers in every view are at least six units apart.
    for (const auto& view : d.views) {
      Matrix centers = Matrix::Zero(3, view.data.cols());
      for (int i = 0; i < d.n_samples(); ++i) centers.row((*d.labels)[i]) += view.data.row(i) / 50.0;
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) CHECK((centers.row(a) - centers.row(b)).norm() >= 5.0);
    }
  }
}
