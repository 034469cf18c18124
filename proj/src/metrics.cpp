#include "evident/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "evident/batch.hpp"
#include "evident/errors.hpp"

namespace evident {

std::optional<double> binary_auc(std::span<const double> scores,
                                 const std::vector<bool>& positive) {
  if (scores.size() != positive.size()) {
    throw validation_error("binary_auc: size mismatch");
  }
  std::size_t n_pos = 0;
  for (bool p : positive) n_pos += p ? 1 : 0;
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // Midranks over tied scores, then the Mann-Whitney statistic.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) {
      if (positive[order[t]]) rank_sum_pos += midrank;
    }
    i = j + 1;
  }
  const double u = rank_sum_pos -
                   0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

MetricsReport evaluate(const MultiViewModel& model, const LoadedDataset& data,
                       std::span<const std::size_t> rows) {
  if (rows.empty()) throw validation_error("evaluate: empty split");
  const std::size_t k_count = model.class_count;
  const std::vector<Prediction> predictions =
      predict_rows_parallel(model, data, rows);

  MetricsReport report;

  // Confusion counts.
  std::vector<std::size_t> tp(k_count, 0), fp(k_count, 0), fn(k_count, 0),
      support(k_count, 0);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int label = data.labels[rows[i]];
    if (label < 0 || static_cast<std::size_t>(label) >= k_count) {
      throw validation_error("evaluate: row " + std::to_string(rows[i]) +
                             " has label outside [0, K)");
    }
    const std::size_t truth = static_cast<std::size_t>(label);
    const std::size_t pred = predictions[i].predicted_class;
    ++support[truth];
    if (pred == truth) {
      ++correct;
      ++tp[truth];
    } else {
      ++fp[pred];
      ++fn[truth];
    }
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(rows.size());

  double f1_sum = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    PerClassMetrics pc;
    pc.support = support[k];
    const double denom_p = static_cast<double>(tp[k] + fp[k]);
    const double denom_r = static_cast<double>(tp[k] + fn[k]);
    pc.precision = denom_p > 0.0 ? static_cast<double>(tp[k]) / denom_p : 0.0;
    pc.recall = denom_r > 0.0 ? static_cast<double>(tp[k]) / denom_r : 0.0;
    const double pr = pc.precision + pc.recall;
    pc.f1 = pr > 0.0 ? 2.0 * pc.precision * pc.recall / pr : 0.0;
    f1_sum += pc.f1;
    report.per_class.push_back(pc);
  }
  report.macro_f1 = f1_sum / static_cast<double>(k_count);

  // Macro one-vs-rest AUC over classes that have both kinds of rows.
  std::vector<double> scores(rows.size());
  std::vector<bool> positive(rows.size());
  double auc_sum = 0.0;
  std::size_t auc_terms = 0;
  for (std::size_t k = 0; k < k_count; ++k) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      scores[i] = predictions[i].probs.probs[k];
      positive[i] = static_cast<std::size_t>(data.labels[rows[i]]) == k;
    }
    if (auto auc = binary_auc(scores, positive)) {
      auc_sum += *auc;
      ++auc_terms;
    }
  }
  if (auc_terms > 0) report.macro_auc = auc_sum / static_cast<double>(auc_terms);

  if (model.head == HeadKind::kEvidential) {
    double u_sum = 0.0;
    for (const Prediction& p : predictions) {
      u_sum += p.fusion->opinion.uncertainty;
    }
    report.mean_uncertainty_id = u_sum / static_cast<double>(predictions.size());
  }
  return report;
}

double mean_fused_uncertainty(const MultiViewModel& model,
                              const LoadedDataset& data,
                              std::span<const std::size_t> rows) {
  if (rows.empty()) throw validation_error("mean_fused_uncertainty: empty split");
  if (model.head != HeadKind::kEvidential) {
    throw validation_error(
        "mean_fused_uncertainty: softmax models carry no uncertainty");
  }
  const std::vector<Prediction> predictions =
      predict_rows_parallel(model, data, rows);
  double sum = 0.0;
  for (const Prediction& p : predictions) sum += p.fusion->opinion.uncertainty;
  return sum / static_cast<double>(predictions.size());
}

}  // namespace evident
