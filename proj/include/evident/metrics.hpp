#pragma once

#include <optional>
#include <span>
#include <vector>

#include "evident/classifier.hpp"
#include "evident/dataset.hpp"

namespace evident {

struct PerClassMetrics {
  std::size_t support = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Classification quality on one split. macro_auc is absent when no class
// has both positives and negatives to rank (e.g. a single-sample split);
// mean uncertainties are absent for the softmax baseline, which carries
// no uncertainty mass.
struct MetricsReport {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::optional<double> macro_auc;
  std::optional<double> mean_uncertainty_id;
  std::optional<double> mean_uncertainty_ood;
  std::vector<PerClassMetrics> per_class;
};

// Rank-based (Mann-Whitney) AUC with midranks on ties. Returns nullopt
// when either class is empty.
std::optional<double> binary_auc(std::span<const double> scores,
                                 const std::vector<bool>& positive);

// Evaluates the model over the given rows (parallel batch prediction,
// fixed-order aggregation). Throws validation_error on an empty split.
MetricsReport evaluate(const MultiViewModel& model, const LoadedDataset& data,
                       std::span<const std::size_t> rows);

// Mean fused uncertainty over rows; evidential models only.
double mean_fused_uncertainty(const MultiViewModel& model,
                              const LoadedDataset& data,
                              std::span<const std::size_t> rows);

}  // namespace evident
