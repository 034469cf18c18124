#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evident/dataset.hpp"
#include "evident/fusion.hpp"
#include "evident/loss.hpp"
#include "evident/opinion.hpp"
#include "evident/rng.hpp"

namespace evident {

// What the per-view heads emit and how per-sample decisions are formed
// from them. Softmax heads exist as the score-averaging baseline; the
// evidential heads are the product.
enum class HeadKind { kEvidential, kSoftmax };
enum class DecisionRule { kIder, kDs, kScoreAverage };

std::string to_string(HeadKind head);
HeadKind head_kind_from_string(const std::string& name);
std::string to_string(DecisionRule rule);
DecisionRule decision_rule_from_string(const std::string& name);

// Two-layer perceptron for one view: input -> rectifier hidden -> K
// pre-activations. The evidential head reads evidence through softplus,
// which keeps every alpha = e + 1 at or above one; the softmax baseline
// reads the same pre-activations as logits.
struct ViewModel {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t class_count = 0;
  std::vector<double> w1;  // hidden_dim x input_dim, row-major
  std::vector<double> b1;  // hidden_dim
  std::vector<double> w2;  // class_count x hidden_dim, row-major
  std::vector<double> b2;  // class_count

  // Parameters drawn uniformly in +-1/sqrt(fan_in), in declaration
  // order, so a seed pins the whole model.
  static ViewModel init(std::size_t input_dim, std::size_t hidden_dim,
                        std::size_t class_count, Rng& rng);

  std::size_t parameter_count() const;
  void validate() const;

  // Pre-activations z (length K). Throws on dimension mismatch or
  // non-finite input.
  std::vector<double> forward_raw(std::span<const double> x) const;

  // softplus(z): non-negative per-class evidence.
  Evidence forward_evidence(std::span<const double> x) const;

  // softmax(z): the baseline head.
  std::vector<double> forward_softmax(std::span<const double> x) const;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  int max_epochs = 10;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;
  std::size_t hidden_dim = 64;
  AnnealSchedule anneal;
  HeadKind head = HeadKind::kEvidential;
  DecisionRule decision = DecisionRule::kIder;

  // Adam moment constants; fixed, not tunable.
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  void validate() const;
};

// Adam first/second moments over a view's flattened parameters, plus the
// shared step counter. Part of the checkpoint so training resumes
// deterministically.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t step = 0;
};

struct MultiViewModel {
  std::size_t class_count = 0;
  HeadKind head = HeadKind::kEvidential;
  DecisionRule decision = DecisionRule::kIder;
  std::vector<ViewModel> views;
  std::vector<AdamState> optimizer;  // parallel to views
  TrainConfig config;
  std::string rng_state;  // engine state after training

  std::size_t view_count() const { return views.size(); }
  void validate() const;
};

struct Prediction {
  ClassProbabilities probs;
  std::optional<FusionOutcome> fusion;  // absent for the softmax baseline
  std::size_t predicted_class = 0;
};

// Collects evidence from every view, maps it to opinions, combines them
// under the model's decision rule and reads off class probabilities. For
// softmax models the per-view probability vectors are averaged instead.
Prediction predict(const MultiViewModel& model,
                   std::span<const std::span<const double>> view_inputs);

Prediction predict_row(const MultiViewModel& model, const LoadedDataset& data,
                       std::size_t row);

struct EpochLog {
  int epoch = 0;
  LossBreakdown mean_loss;  // mean over samples and views
  std::optional<double> val_accuracy;
};

struct TrainResult {
  MultiViewModel model;
  std::vector<EpochLog> log;
};

// Deterministic minibatch training: seeded init, seeded shuffling, Adam
// per view, each view head supervised on its own output. Evidential
// heads use the annealed Dirichlet loss; softmax heads use cross
// entropy. Aborts with a diagnostic naming epoch and batch if the loss
// turns non-finite.
TrainResult train(const LoadedDataset& data, const TrainConfig& cfg);

// Numerically stable helpers shared with the tests.
double softplus(double z);
double sigmoid(double z);
std::vector<double> softmax(std::span<const double> z);

}  // namespace evident
