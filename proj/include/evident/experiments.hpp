#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "evident/classifier.hpp"
#include "evident/dataset.hpp"
#include "evident/fusion.hpp"

namespace evident {

// The canonical two-expert conflict scenario: both experts are certain,
// nearly rule out the same class, and fully disagree on the rest.
// Dempster normalization hands the doubly-rejected class all the mass;
// the impartial rule keeps it below 2%.
struct ZadehDemo {
  DirichletOpinion expert_one;
  DirichletOpinion expert_two;
  FusionOutcome ds;
  FusionOutcome ider;
};

ZadehDemo run_conflict_demo();
nlohmann::json zadeh_demo_to_json(const ZadehDemo& demo);
std::string zadeh_demo_table(const ZadehDemo& demo);

struct Histogram {
  std::vector<double> bin_edges;   // bins + 1 edges over [0, 1]
  std::vector<std::size_t> counts;
};

Histogram histogram_unit_interval(std::span<const double> values,
                                  std::size_t bins);

struct OodReport {
  double mean_uncertainty_id = 0.0;
  double mean_uncertainty_ood = 0.0;
  double uncertainty_ratio = 0.0;  // ood / id
  double softmax_mean_maxprob_ood = 0.0;
  Histogram uncertainty_id;
  Histogram uncertainty_ood;
  Histogram softmax_maxprob_ood;
};

// Compares fused uncertainty on the test split against the OOD rows and
// contrasts it with the softmax baseline's peak probability out of
// distribution. Requires a non-empty ood split.
OodReport run_ood_experiment(const MultiViewModel& evidential,
                             const MultiViewModel& softmax_baseline,
                             const LoadedDataset& data,
                             std::size_t histogram_bins = 20);

nlohmann::json ood_report_to_json(const OodReport& report);
std::string ood_histograms_csv(const OodReport& report);

// Self-contained run: generates the standard dataset, trains the
// evidential model and the softmax baseline on it with the given seed,
// and writes report.json plus histograms.csv into out_dir.
OodReport run_ood_pipeline(std::uint64_t seed,
                           const std::filesystem::path& out_dir);

struct RobustnessArmResult {
  std::string pipeline;  // "softmax+score-average" | "evidential+ds" | "evidential+ider"
  double clean_accuracy = 0.0;
  double corrupted_accuracy = 0.0;

  double drop() const { return clean_accuracy - corrupted_accuracy; }
};

struct RobustnessSeedResult {
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;  // absolute, = multiplier * view feature stddev
  std::vector<RobustnessArmResult> arms;
};

struct RobustnessReport {
  std::vector<std::uint64_t> seeds;
  std::size_t corrupted_view = 0;
  double noise_multiplier = 0.0;
  std::vector<RobustnessSeedResult> per_seed;
  // Mean accuracy drop per pipeline, same order as the per-seed arms.
  std::vector<RobustnessArmResult> mean_arms;
};

struct RobustnessConfig {
  std::uint64_t base_seed = 0;
  std::size_t runs = 3;
  std::size_t corrupted_view = 1;
  double noise_multiplier = 5.0;
  std::filesystem::path work_dir;
};

// Trains score-fusion, DS and impartial pipelines on identical data per
// seed and measures the accuracy each loses when one view's test
// features are swamped with noise. The two evidential pipelines share
// trained heads (training never sees the combination rule, so separate
// runs with equal seeds would produce identical weights).
RobustnessReport run_robustness_experiment(const RobustnessConfig& cfg);

nlohmann::json robustness_report_to_json(const RobustnessReport& report);
std::string robustness_report_table(const RobustnessReport& report);

}  // namespace evident
