#include "evident/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "evident/errors.hpp"
#include "evident/log.hpp"
#include "evident/rng.hpp"
#include "evident/serialize.hpp"
#include "evident/version.hpp"

namespace evident {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token, std::size_t row, std::size_t col,
                    const fs::path& path) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw validation_error(path.string() + ": malformed number '" +
                           std::string(token) + "' at data row " +
                           std::to_string(row) + ", column " + std::to_string(col));
  }
  if (!std::isfinite(value)) {
    throw validation_error(path.string() + ": non-finite feature at data row " +
                           std::to_string(row) + ", column " + std::to_string(col));
  }
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

// Draws a unit-norm direction scaled by `length`.
std::vector<double> scaled_direction(std::size_t dim, double length, Rng& rng) {
  std::vector<double> d(dim);
  double norm_sq = 0.0;
  for (double& x : d) {
    x = rng.gaussian(0.0, 1.0);
    norm_sq += x * x;
  }
  const double norm = std::sqrt(norm_sq);
  for (double& x : d) x = x / norm * length;
  return d;
}

void check_disjoint_and_covering(const DatasetManifest& m, std::size_t total) {
  std::vector<int> seen(total, 0);
  auto mark = [&](std::span<const std::size_t> rows, const char* name) {
    for (std::size_t row : rows) {
      if (row >= total) {
        throw validation_error("manifest split '" + std::string(name) +
                               "' references row " + std::to_string(row) +
                               " but the dataset has " + std::to_string(total) +
                               " rows");
      }
      if (seen[row]++) {
        throw validation_error("manifest splits overlap at row " + std::to_string(row));
      }
    }
  };
  mark(m.split.train, "train");
  mark(m.split.val, "val");
  mark(m.split.test, "test");
  mark(m.split.ood, "ood");
  for (std::size_t row = 0; row < total; ++row) {
    if (!seen[row]) {
      throw validation_error("manifest splits do not cover row " + std::to_string(row));
    }
  }
}

}  // namespace

void SyntheticSpec::validate() const {
  if (class_count < 2) throw validation_error("SyntheticSpec: class_count must be >= 2");
  if (view_count < 1) throw validation_error("SyntheticSpec: view_count must be >= 1");
  if (!feature_dims.empty() && feature_dims.size() != view_count) {
    throw validation_error("SyntheticSpec: feature_dims must have one entry per view");
  }
  for (std::size_t dim : feature_dims) {
    if (dim == 0) throw validation_error("SyntheticSpec: feature dims must be >= 1");
  }
  if (!(sigma > 0.0)) throw validation_error("SyntheticSpec: sigma must be > 0");
  if (separation < 0.0) throw validation_error("SyntheticSpec: separation must be >= 0");
  if (conflict_fraction < 0.0 || conflict_fraction > 1.0) {
    throw validation_error("SyntheticSpec: conflict_fraction must be in [0, 1]");
  }
  if (conflict_view.has_value() && *conflict_view >= view_count) {
    throw validation_error("SyntheticSpec: conflict_view out of range");
  }
  if (samples_per_class == 0) {
    throw validation_error("SyntheticSpec: samples_per_class must be >= 1");
  }
  if (train_fraction <= 0.0 || val_fraction < 0.0 ||
      train_fraction + val_fraction >= 1.0) {
    throw validation_error("SyntheticSpec: fractions must satisfy 0 < train, 0 <= val, train + val < 1");
  }
}

SyntheticSpec SyntheticSpec::standard() {
  SyntheticSpec spec;
  spec.feature_dims.assign(spec.view_count, 96);
  spec.ood_samples = 200;
  return spec;
}

Matrix read_csv_matrix(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw validation_error(path.string() + ": missing header row");
  }
  const std::size_t cols = split_fields(line).size();

  Matrix m;
  m.cols = cols;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() && in.eof()) break;
    const auto fields = split_fields(line);
    if (fields.size() != cols) {
      throw validation_error(path.string() + ": data row " + std::to_string(row) +
                             " has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m.data.push_back(parse_double(fields[c], row, c, path));
    }
    ++row;
  }
  m.rows = row;
  return m;
}

void write_csv_matrix(const fs::path& path, const Matrix& m,
                      const std::string& column_prefix) {
  std::ostringstream out;
  for (std::size_t c = 0; c < m.cols; ++c) {
    if (c) out << ',';
    out << column_prefix << c;
  }
  out << '\n';
  for (std::size_t r = 0; r < m.rows; ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (c) out << ',';
      out << format_double(row[c]);
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

std::vector<int> read_labels_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw validation_error(path.string() + ": missing header row");
  }
  std::vector<int> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() && in.eof()) break;
    int value = 0;
    const char* begin = line.data();
    const char* end = begin + line.size();
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end) {
      throw validation_error(path.string() + ": malformed label '" + line +
                             "' at data row " + std::to_string(row));
    }
    labels.push_back(value);
    ++row;
  }
  return labels;
}

void write_labels_csv(const fs::path& path, std::span<const int> labels) {
  std::ostringstream out;
  out << "label\n";
  for (int label : labels) out << label << '\n';
  write_text_file(path, out.str());
}

void save_manifest(const DatasetManifest& manifest, const fs::path& path) {
  write_json_file(path, manifest_to_json(manifest));
}

DatasetManifest generate_synthetic(const SyntheticSpec& spec_in, std::uint64_t seed,
                                   const fs::path& out_dir) {
  SyntheticSpec spec = spec_in;
  if (spec.feature_dims.empty()) spec.feature_dims.assign(spec.view_count, 16);
  spec.validate();

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw validation_error("cannot create output directory " + out_dir.string() +
                           ": " + ec.message());
  }

  Rng rng(seed);
  const std::size_t k_count = spec.class_count;
  const std::size_t v_count = spec.view_count;
  const std::size_t labeled = k_count * spec.samples_per_class;
  const std::size_t total = labeled + spec.ood_samples;

  // Class signatures: one scaled unit direction per class and view.
  std::vector<std::vector<std::vector<double>>> means(k_count);
  for (std::size_t c = 0; c < k_count; ++c) {
    means[c].reserve(v_count);
    for (std::size_t v = 0; v < v_count; ++v) {
      means[c].push_back(scaled_direction(spec.feature_dims[v], spec.separation, rng));
    }
  }
  std::vector<std::vector<double>> ood_means;
  if (spec.ood_samples > 0) {
    ood_means.reserve(v_count);
    for (std::size_t v = 0; v < v_count; ++v) {
      ood_means.push_back(scaled_direction(spec.feature_dims[v], spec.ood_offset, rng));
    }
  }

  std::vector<Matrix> views;
  views.reserve(v_count);
  for (std::size_t v = 0; v < v_count; ++v) {
    views.emplace_back(total, spec.feature_dims[v]);
  }
  std::vector<int> labels(total, -1);

  for (std::size_t c = 0; c < k_count; ++c) {
    for (std::size_t i = 0; i < spec.samples_per_class; ++i) {
      const std::size_t row = c * spec.samples_per_class + i;
      labels[row] = static_cast<int>(c);
      for (std::size_t v = 0; v < v_count; ++v) {
        auto dst = views[v].row(row);
        const auto& mu = means[c][v];
        for (std::size_t d = 0; d < dst.size(); ++d) {
          dst[d] = rng.gaussian(mu[d], spec.sigma);
        }
      }
    }
  }

  // Conflict injection: an exact seeded fraction of labeled rows gets one
  // view redrawn around a different class's signature.
  std::vector<std::size_t> candidates(labeled);
  std::iota(candidates.begin(), candidates.end(), 0);
  rng.shuffle(candidates);
  const std::size_t conflicted =
      static_cast<std::size_t>(spec.conflict_fraction * static_cast<double>(labeled));
  candidates.resize(conflicted);
  std::sort(candidates.begin(), candidates.end());

  nlohmann::json sidecar = nlohmann::json::array();
  for (std::size_t row : candidates) {
    const std::size_t view = spec.conflict_view.has_value()
                                 ? *spec.conflict_view
                                 : static_cast<std::size_t>(rng.below(v_count));
    const std::size_t truth = static_cast<std::size_t>(labels[row]);
    std::size_t substitute = static_cast<std::size_t>(rng.below(k_count - 1));
    if (substitute >= truth) ++substitute;
    auto dst = views[view].row(row);
    const auto& mu = means[substitute][view];
    for (std::size_t d = 0; d < dst.size(); ++d) {
      dst[d] = rng.gaussian(mu[d], spec.sigma);
    }
    sidecar.push_back(nlohmann::json{
        {"row", row}, {"view", view}, {"substituted_class", substitute}});
  }

  for (std::size_t i = 0; i < spec.ood_samples; ++i) {
    const std::size_t row = labeled + i;
    for (std::size_t v = 0; v < v_count; ++v) {
      auto dst = views[v].row(row);
      for (std::size_t d = 0; d < dst.size(); ++d) {
        dst[d] = rng.gaussian(ood_means[v][d], spec.sigma);
      }
    }
  }

  // Stratified split of the labeled rows.
  DatasetManifest manifest;
  manifest.version = kLibraryVersion;
  manifest.class_count = k_count;
  manifest.labels_csv = "labels.csv";
  manifest.generator_seed = seed;
  manifest.generator_spec_json = synthetic_spec_to_json(spec).dump();
  for (std::size_t c = 0; c < k_count; ++c) {
    std::vector<std::size_t> rows(spec.samples_per_class);
    std::iota(rows.begin(), rows.end(), c * spec.samples_per_class);
    rng.shuffle(rows);
    const std::size_t n_train =
        static_cast<std::size_t>(spec.train_fraction * static_cast<double>(rows.size()));
    const std::size_t n_val =
        static_cast<std::size_t>(spec.val_fraction * static_cast<double>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i < n_train) {
        manifest.split.train.push_back(rows[i]);
      } else if (i < n_train + n_val) {
        manifest.split.val.push_back(rows[i]);
      } else {
        manifest.split.test.push_back(rows[i]);
      }
    }
  }
  std::sort(manifest.split.train.begin(), manifest.split.train.end());
  std::sort(manifest.split.val.begin(), manifest.split.val.end());
  std::sort(manifest.split.test.begin(), manifest.split.test.end());
  for (std::size_t i = 0; i < spec.ood_samples; ++i) {
    manifest.split.ood.push_back(labeled + i);
  }

  for (std::size_t v = 0; v < v_count; ++v) {
    const std::string name = "view_" + std::to_string(v) + ".csv";
    write_csv_matrix(out_dir / name, views[v]);
    manifest.views.push_back(ViewDescriptor{name, spec.feature_dims[v]});
  }
  write_labels_csv(out_dir / "labels.csv", labels);
  write_json_file(out_dir / "conflicts.json", sidecar);
  save_manifest(manifest, out_dir / "manifest.json");
  EVIDENT_LOG_INFO("generated synthetic dataset: %zu rows (%zu OOD), %zu views -> %s",
                   total, spec.ood_samples, v_count, out_dir.string().c_str());
  return manifest;
}

LoadedDataset load_dataset(const fs::path& manifest_path) {
  LoadedDataset data;
  data.manifest = manifest_from_json(load_json_file(manifest_path));
  const fs::path base = manifest_path.parent_path();

  data.labels = read_labels_csv(base / data.manifest.labels_csv);
  const std::size_t total = data.labels.size();
  for (std::size_t v = 0; v < data.manifest.views.size(); ++v) {
    const ViewDescriptor& d = data.manifest.views[v];
    Matrix m = read_csv_matrix(base / d.csv_path);
    if (m.cols != d.feature_dim) {
      throw validation_error(d.csv_path + ": has " + std::to_string(m.cols) +
                             " features, manifest says " +
                             std::to_string(d.feature_dim));
    }
    if (m.rows != total) {
      throw validation_error(d.csv_path + ": has " + std::to_string(m.rows) +
                             " rows, labels file has " + std::to_string(total));
    }
    data.views.push_back(std::move(m));
  }

  if (data.manifest.class_count < 2) {
    throw validation_error("manifest: class_count must be >= 2");
  }
  check_disjoint_and_covering(data.manifest, total);

  std::set<std::size_t> ood_rows(data.manifest.split.ood.begin(),
                                 data.manifest.split.ood.end());
  for (std::size_t row = 0; row < total; ++row) {
    const int label = data.labels[row];
    const bool is_ood = ood_rows.count(row) > 0;
    if (is_ood && label != -1) {
      throw validation_error("row " + std::to_string(row) +
                             " is in the ood split but has class label " +
                             std::to_string(label));
    }
    if (!is_ood && (label < 0 ||
                    static_cast<std::size_t>(label) >= data.manifest.class_count)) {
      throw validation_error("row " + std::to_string(row) + " has label " +
                             std::to_string(label) + ", expected [0, " +
                             std::to_string(data.manifest.class_count) + ")");
    }
  }
  return data;
}

double view_feature_stddev(const LoadedDataset& data, std::size_t view_index,
                           std::span<const std::size_t> rows) {
  if (view_index >= data.views.size()) {
    throw validation_error("view_feature_stddev: view index out of range");
  }
  if (rows.empty()) throw validation_error("view_feature_stddev: no rows");
  const Matrix& m = data.views[view_index];
  double var_sum = 0.0;
  for (std::size_t c = 0; c < m.cols; ++c) {
    double mean = 0.0;
    for (std::size_t row : rows) mean += m.at(row, c);
    mean /= static_cast<double>(rows.size());
    double var = 0.0;
    for (std::size_t row : rows) {
      const double d = m.at(row, c) - mean;
      var += d * d;
    }
    var_sum += var / static_cast<double>(rows.size());
  }
  return std::sqrt(var_sum / static_cast<double>(m.cols));
}

DatasetManifest corrupt_view(const LoadedDataset& data, std::size_t view_index,
                             double noise_sigma, std::uint64_t seed,
                             const fs::path& out_dir) {
  if (view_index >= data.views.size()) {
    throw validation_error("corrupt_view: view index " + std::to_string(view_index) +
                           " out of range for " + std::to_string(data.views.size()) +
                           " views");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw validation_error("corrupt_view: noise_sigma must be finite and >= 0");
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw validation_error("cannot create output directory " + out_dir.string() +
                           ": " + ec.message());
  }

  std::vector<Matrix> views = data.views;
  if (noise_sigma > 0.0) {
    Rng rng(seed);
    // Test rows only, ascending, so the draw order is pinned.
    std::vector<std::size_t> rows(data.manifest.split.test.begin(),
                                  data.manifest.split.test.end());
    std::sort(rows.begin(), rows.end());
    Matrix& target = views[view_index];
    for (std::size_t row : rows) {
      auto dst = target.row(row);
      for (double& x : dst) x += rng.gaussian(0.0, noise_sigma);
    }
  }

  DatasetManifest manifest = data.manifest;
  manifest.views.clear();
  for (std::size_t v = 0; v < views.size(); ++v) {
    const std::string name = "view_" + std::to_string(v) + ".csv";
    write_csv_matrix(out_dir / name, views[v]);
    manifest.views.push_back(ViewDescriptor{name, views[v].cols});
  }
  write_labels_csv(out_dir / "labels.csv", data.labels);
  manifest.labels_csv = "labels.csv";
  write_json_file(out_dir / "corruption.json",
                  nlohmann::json{{"view", view_index},
                                 {"noise_sigma", noise_sigma},
                                 {"seed", seed},
                                 {"scope", "test split only"}});
  save_manifest(manifest, out_dir / "manifest.json");
  return manifest;
}

}  // namespace evident
