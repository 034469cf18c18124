#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace evident {

// Dense row-major feature matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }
  std::span<double> row(std::size_t r) {
    return {data.data() + r * cols, cols};
  }
};

struct ViewDescriptor {
  std::string csv_path;  // relative to the manifest's directory
  std::size_t feature_dim = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
  std::vector<std::size_t> ood;  // rows outside the K training classes
};

// Description of a multi-view tabular dataset: per-view feature CSVs, a
// labels CSV and a split assignment. OOD rows carry label -1 and appear
// only in the ood split.
struct DatasetManifest {
  std::string version;
  std::size_t class_count = 0;
  std::vector<ViewDescriptor> views;
  std::string labels_csv;
  SplitIndices split;
  std::optional<std::uint64_t> generator_seed;  // present when synthetic
  std::string generator_spec_json;              // raw spec, for audit

  std::size_t view_count() const { return views.size(); }
};

struct LoadedDataset {
  DatasetManifest manifest;
  std::vector<Matrix> views;
  std::vector<int> labels;  // -1 marks OOD rows

  std::size_t sample_count() const { return labels.size(); }
  std::size_t class_count() const { return manifest.class_count; }
  std::size_t view_count() const { return views.size(); }
};

// Gaussian multi-view cluster generator. Each class gets one unit-norm
// direction per view, scaled by `separation`; samples are isotropic
// draws around it. A seeded fraction of samples has one view's class
// signature replaced by another class's signature (the recorded
// "conflict" samples), standing in for views that genuinely disagree.
// An optional extra cluster, offset from every class, provides
// out-of-distribution rows.
struct SyntheticSpec {
  std::size_t class_count = 4;
  std::size_t view_count = 3;
  std::vector<std::size_t> feature_dims;  // one per view
  double separation = 4.0;
  double sigma = 1.0;
  std::size_t samples_per_class = 200;
  double conflict_fraction = 0.1;
  std::optional<std::size_t> conflict_view;  // fixed view; random when absent
  std::size_t ood_samples = 0;
  double ood_offset = 8.0;
  double train_fraction = 0.6;
  double val_fraction = 0.2;  // remainder is the test split

  void validate() const;

  // The desk-scale default workload: K=4, V=3, dim 96 per view,
  // separation 4 sigma, 200 samples per class, 10% conflict, plus an
  // OOD cluster of 200 samples at offset 8. The high feature dimension
  // keeps random OOD directions nearly orthogonal to every class
  // signature, which is what makes the evidence heads go quiet off
  // distribution.
  static SyntheticSpec standard();
};

// Writes per-view CSVs, labels.csv, conflict sidecar and manifest.json
// into out_dir (created if needed) and returns the manifest.
// Deterministic for a fixed spec and seed.
DatasetManifest generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed,
                                   const std::filesystem::path& out_dir);

// Reads and validates a manifest plus the files it references. Checks
// row-count agreement, finite features, label range, and that the
// splits are disjoint and cover every row.
LoadedDataset load_dataset(const std::filesystem::path& manifest_path);

// Re-emits the dataset into out_dir with seeded Gaussian noise of the
// given stddev added to the chosen view's *test-split* rows only.
// Training and validation rows are byte-identical to the source.
DatasetManifest corrupt_view(const LoadedDataset& data, std::size_t view_index,
                             double noise_sigma, std::uint64_t seed,
                             const std::filesystem::path& out_dir);

// Scalar feature scale of one view: root-mean-square column standard
// deviation over the given rows. Used to size corruption noise.
double view_feature_stddev(const LoadedDataset& data, std::size_t view_index,
                           std::span<const std::size_t> rows);

// CSV helpers (header row expected/emitted; values must be finite).
Matrix read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path, const Matrix& m,
                      const std::string& column_prefix = "f");
std::vector<int> read_labels_csv(const std::filesystem::path& path);
void write_labels_csv(const std::filesystem::path& path,
                      std::span<const int> labels);

void save_manifest(const DatasetManifest& manifest,
                   const std::filesystem::path& path);

}  // namespace evident
