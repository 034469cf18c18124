#pragma once

#include <span>
#include <vector>

#include "evident/classifier.hpp"
#include "evident/dataset.hpp"

namespace evident {

// Batch kernels over dataset rows. Each kernel exists twice: a serial
// reference and an OpenMP version parallelized over samples. Per-sample
// work is independent and every result is written to its own slot, so
// the two produce bit-identical output; the tests assert exactly that,
// and evaluation paths use the parallel versions. Reductions that feed
// reported metrics run serially afterwards in fixed row order.

std::vector<Prediction> predict_rows_serial(const MultiViewModel& model,
                                            const LoadedDataset& data,
                                            std::span<const std::size_t> rows);

std::vector<Prediction> predict_rows_parallel(const MultiViewModel& model,
                                              const LoadedDataset& data,
                                              std::span<const std::size_t> rows);

// Per-row evidence for one view model over a feature matrix.
Matrix forward_evidence_rows_serial(const ViewModel& model, const Matrix& inputs);
Matrix forward_evidence_rows_parallel(const ViewModel& model, const Matrix& inputs);

// Mean evidential loss over rows at a fixed lambda (fixed-order sum).
double mean_total_loss_serial(const MultiViewModel& model,
                              const LoadedDataset& data,
                              std::span<const std::size_t> rows, double lambda);
double mean_total_loss_parallel(const MultiViewModel& model,
                                const LoadedDataset& data,
                                std::span<const std::size_t> rows, double lambda);

}  // namespace evident
