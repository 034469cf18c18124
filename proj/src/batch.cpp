#include "evident/batch.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "evident/errors.hpp"
#include "evident/loss.hpp"

namespace evident {

namespace {

void check_rows(const LoadedDataset& data, std::span<const std::size_t> rows) {
  for (std::size_t row : rows) {
    if (row >= data.sample_count()) {
      throw validation_error("batch: row " + std::to_string(row) +
                             " out of range");
    }
  }
}

double row_total_loss(const MultiViewModel& model, const LoadedDataset& data,
                      std::size_t row, double lambda) {
  const std::size_t label = static_cast<std::size_t>(data.labels[row]);
  double sum = 0.0;
  for (std::size_t v = 0; v < model.views.size(); ++v) {
    Evidence e = model.views[v].forward_evidence(data.views[v].row(row));
    std::vector<double> alpha(e.values.size());
    for (std::size_t k = 0; k < alpha.size(); ++k) alpha[k] = e.values[k] + 1.0;
    sum += total_loss_at_lambda(alpha, label, lambda).total;
  }
  return sum / static_cast<double>(model.views.size());
}

}  // namespace

std::vector<Prediction> predict_rows_serial(const MultiViewModel& model,
                                            const LoadedDataset& data,
                                            std::span<const std::size_t> rows) {
  check_rows(data, rows);
  std::vector<Prediction> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out[i] = predict_row(model, data, rows[i]);
  }
  return out;
}

std::vector<Prediction> predict_rows_parallel(const MultiViewModel& model,
                                              const LoadedDataset& data,
                                              std::span<const std::size_t> rows) {
  check_rows(data, rows);
  std::vector<Prediction> out(rows.size());
  const std::int64_t n = static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    out[i] = predict_row(model, data, rows[i]);
  }
  return out;
}

Matrix forward_evidence_rows_serial(const ViewModel& model, const Matrix& inputs) {
  Matrix out(inputs.rows, model.class_count);
  for (std::size_t r = 0; r < inputs.rows; ++r) {
    Evidence e = model.forward_evidence(inputs.row(r));
    std::copy(e.values.begin(), e.values.end(), out.row(r).begin());
  }
  return out;
}

Matrix forward_evidence_rows_parallel(const ViewModel& model,
                                      const Matrix& inputs) {
  Matrix out(inputs.rows, model.class_count);
  const std::int64_t n = static_cast<std::int64_t>(inputs.rows);
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < n; ++r) {
    Evidence e = model.forward_evidence(inputs.row(r));
    std::copy(e.values.begin(), e.values.end(), out.row(r).begin());
  }
  return out;
}

double mean_total_loss_serial(const MultiViewModel& model,
                              const LoadedDataset& data,
                              std::span<const std::size_t> rows, double lambda) {
  check_rows(data, rows);
  if (rows.empty()) throw validation_error("mean_total_loss: no rows");
  double sum = 0.0;
  for (std::size_t row : rows) {
    sum += row_total_loss(model, data, row, lambda);
  }
  return sum / static_cast<double>(rows.size());
}

double mean_total_loss_parallel(const MultiViewModel& model,
                                const LoadedDataset& data,
                                std::span<const std::size_t> rows, double lambda) {
  check_rows(data, rows);
  if (rows.empty()) throw validation_error("mean_total_loss: no rows");
  std::vector<double> per_row(rows.size());
  const std::int64_t n = static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    per_row[i] = row_total_loss(model, data, rows[i], lambda);
  }
  // Fixed-order reduction keeps the reported number run-invariant.
  double sum = 0.0;
  for (double v : per_row) sum += v;
  return sum / static_cast<double>(rows.size());
}

}  // namespace evident
