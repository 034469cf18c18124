#include "evident/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "evident/errors.hpp"
#include "evident/log.hpp"

namespace evident {

std::string to_string(HeadKind head) {
  return head == HeadKind::kEvidential ? "evidential" : "softmax";
}

HeadKind head_kind_from_string(const std::string& name) {
  if (name == "evidential") return HeadKind::kEvidential;
  if (name == "softmax") return HeadKind::kSoftmax;
  throw validation_error("unknown head kind '" + name +
                         "' (expected evidential|softmax)");
}

std::string to_string(DecisionRule rule) {
  switch (rule) {
    case DecisionRule::kIder: return "ider";
    case DecisionRule::kDs: return "ds";
    case DecisionRule::kScoreAverage: return "score-average";
  }
  return "?";
}

DecisionRule decision_rule_from_string(const std::string& name) {
  if (name == "ider") return DecisionRule::kIder;
  if (name == "ds") return DecisionRule::kDs;
  if (name == "score-average" || name == "score_average")
    return DecisionRule::kScoreAverage;
  throw validation_error("unknown decision rule '" + name +
                         "' (expected ider|ds|score-average)");
}

double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double ez = std::exp(z);
  return ez / (1.0 + ez);
}

std::vector<double> softmax(std::span<const double> z) {
  const double zmax = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i] = std::exp(z[i] - zmax);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

ViewModel ViewModel::init(std::size_t input_dim, std::size_t hidden_dim,
                          std::size_t class_count, Rng& rng) {
  if (input_dim == 0 || hidden_dim == 0 || class_count < 2) {
    throw validation_error("ViewModel::init: bad dimensions");
  }
  ViewModel m;
  m.input_dim = input_dim;
  m.hidden_dim = hidden_dim;
  m.class_count = class_count;
  m.w1.resize(hidden_dim * input_dim);
  m.b1.resize(hidden_dim);
  m.w2.resize(class_count * hidden_dim);
  m.b2.resize(class_count);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  for (double& w : m.w1) w = rng.uniform(-bound1, bound1);
  for (double& w : m.b1) w = rng.uniform(-bound1, bound1);
  for (double& w : m.w2) w = rng.uniform(-bound2, bound2);
  for (double& w : m.b2) w = rng.uniform(-bound2, bound2);
  return m;
}

std::size_t ViewModel::parameter_count() const {
  return w1.size() + b1.size() + w2.size() + b2.size();
}

void ViewModel::validate() const {
  if (w1.size() != hidden_dim * input_dim || b1.size() != hidden_dim ||
      w2.size() != class_count * hidden_dim || b2.size() != class_count) {
    throw validation_error("ViewModel: parameter sizes do not match dimensions");
  }
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x); });
  };
  if (!finite(w1) || !finite(b1) || !finite(w2) || !finite(b2)) {
    throw validation_error("ViewModel: non-finite parameter");
  }
}

namespace {

void check_input(const ViewModel& m, std::span<const double> x) {
  if (x.size() != m.input_dim) {
    throw validation_error("ViewModel: input has " + std::to_string(x.size()) +
                           " features, expected " + std::to_string(m.input_dim));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw validation_error("ViewModel: non-finite input at feature " +
                             std::to_string(i));
    }
  }
}

// Forward pass keeping the intermediates needed for backprop.
struct ForwardTrace {
  std::vector<double> pre_hidden;  // w1 x + b1
  std::vector<double> hidden;      // relu(pre_hidden)
  std::vector<double> z;           // w2 hidden + b2
};

ForwardTrace forward_trace(const ViewModel& m, std::span<const double> x) {
  ForwardTrace t;
  t.pre_hidden.resize(m.hidden_dim);
  t.hidden.resize(m.hidden_dim);
  for (std::size_t h = 0; h < m.hidden_dim; ++h) {
    double acc = m.b1[h];
    const double* row = m.w1.data() + h * m.input_dim;
    for (std::size_t i = 0; i < m.input_dim; ++i) acc += row[i] * x[i];
    t.pre_hidden[h] = acc;
    t.hidden[h] = acc > 0.0 ? acc : 0.0;
  }
  t.z.resize(m.class_count);
  for (std::size_t k = 0; k < m.class_count; ++k) {
    double acc = m.b2[k];
    const double* row = m.w2.data() + k * m.hidden_dim;
    for (std::size_t h = 0; h < m.hidden_dim; ++h) acc += row[h] * t.hidden[h];
    t.z[k] = acc;
  }
  return t;
}

}  // namespace

std::vector<double> ViewModel::forward_raw(std::span<const double> x) const {
  check_input(*this, x);
  return forward_trace(*this, x).z;
}

Evidence ViewModel::forward_evidence(std::span<const double> x) const {
  std::vector<double> z = forward_raw(x);
  Evidence e;
  e.values.resize(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) e.values[k] = softplus(z[k]);
  return e;
}

std::vector<double> ViewModel::forward_softmax(std::span<const double> x) const {
  return softmax(forward_raw(x));
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw validation_error("TrainConfig: learning_rate must be > 0");
  }
  if (max_epochs < 1) throw validation_error("TrainConfig: max_epochs must be >= 1");
  if (batch_size == 0) throw validation_error("TrainConfig: batch_size must be >= 1");
  if (hidden_dim == 0) throw validation_error("TrainConfig: hidden_dim must be >= 1");
  anneal.validate();
}

void MultiViewModel::validate() const {
  if (views.empty()) throw validation_error("MultiViewModel: no views");
  if (optimizer.size() != views.size()) {
    throw validation_error("MultiViewModel: optimizer state count mismatch");
  }
  for (const auto& view : views) {
    view.validate();
    if (view.class_count != class_count) {
      throw validation_error("MultiViewModel: views disagree on class count");
    }
  }
}

namespace {

std::vector<DirichletOpinion> view_opinions(
    const MultiViewModel& model,
    std::span<const std::span<const double>> view_inputs) {
  std::vector<DirichletOpinion> opinions;
  opinions.reserve(model.views.size());
  for (std::size_t v = 0; v < model.views.size(); ++v) {
    opinions.push_back(
        opinion_from_evidence(model.views[v].forward_evidence(view_inputs[v])));
  }
  return opinions;
}

}  // namespace

Prediction predict(const MultiViewModel& model,
                   std::span<const std::span<const double>> view_inputs) {
  if (view_inputs.size() != model.views.size()) {
    throw validation_error("predict: got " + std::to_string(view_inputs.size()) +
                           " views, model has " +
                           std::to_string(model.views.size()));
  }

  Prediction out;
  if (model.head == HeadKind::kSoftmax) {
    // Score fusion: average the per-view probability vectors.
    std::vector<double> mean(model.class_count, 0.0);
    for (std::size_t v = 0; v < model.views.size(); ++v) {
      std::vector<double> p = model.views[v].forward_softmax(view_inputs[v]);
      for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += p[k];
    }
    for (double& m : mean) m /= static_cast<double>(model.views.size());
    out.probs.probs = std::move(mean);
    out.predicted_class = argmax_class(out.probs.probs);
    return out;
  }

  const std::vector<DirichletOpinion> opinions = view_opinions(model, view_inputs);
  FusionOutcome fused =
      combine_all(opinions, model.decision == DecisionRule::kDs ? FusionRule::kDs
                                                                : FusionRule::kIder);
  if (fused.recovered_evidence.has_value()) {
    out.probs = expected_probabilities(*fused.recovered_evidence);
  } else {
    // Fully certain fused opinion: the expected probabilities coincide
    // with the belief masses in the infinite-strength limit.
    out.probs.probs = fused.opinion.beliefs;
  }
  out.predicted_class = argmax_class(fused.opinion.beliefs);
  out.fusion = std::move(fused);
  return out;
}

Prediction predict_row(const MultiViewModel& model, const LoadedDataset& data,
                       std::size_t row) {
  std::vector<std::span<const double>> inputs;
  inputs.reserve(data.views.size());
  for (const Matrix& view : data.views) inputs.push_back(view.row(row));
  return predict(model, inputs);
}

namespace {

// Flattened-gradient segments for one view, in parameter order.
struct ViewGrad {
  std::vector<double> w1, b1, w2, b2;

  explicit ViewGrad(const ViewModel& m)
      : w1(m.w1.size(), 0.0),
        b1(m.b1.size(), 0.0),
        w2(m.w2.size(), 0.0),
        b2(m.b2.size(), 0.0) {}

  void scale(double factor) {
    for (double& g : w1) g *= factor;
    for (double& g : b1) g *= factor;
    for (double& g : w2) g *= factor;
    for (double& g : b2) g *= factor;
  }
};

// Backprop from d(loss)/d(pre-activation z) through the perceptron.
void accumulate_backward(const ViewModel& m, std::span<const double> x,
                         const ForwardTrace& t, std::span<const double> dz,
                         ViewGrad& grad) {
  std::vector<double> dhidden(m.hidden_dim, 0.0);
  for (std::size_t k = 0; k < m.class_count; ++k) {
    const double g = dz[k];
    double* w2_row = grad.w2.data() + k * m.hidden_dim;
    const double* w2_model = m.w2.data() + k * m.hidden_dim;
    for (std::size_t h = 0; h < m.hidden_dim; ++h) {
      w2_row[h] += g * t.hidden[h];
      dhidden[h] += g * w2_model[h];
    }
    grad.b2[k] += g;
  }
  for (std::size_t h = 0; h < m.hidden_dim; ++h) {
    if (t.pre_hidden[h] <= 0.0) continue;  // rectifier gate
    const double g = dhidden[h];
    double* w1_row = grad.w1.data() + h * m.input_dim;
    for (std::size_t i = 0; i < m.input_dim; ++i) w1_row[i] += g * x[i];
    grad.b1[h] += g;
  }
}

void adam_update_segment(std::span<double> params, std::span<const double> grad,
                         std::span<double> m, std::span<double> v,
                         double lr_t, double beta1, double beta2, double eps) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
    params[i] -= lr_t * m[i] / (std::sqrt(v[i]) + eps);
  }
}

void adam_step(ViewModel& model, const ViewGrad& grad, AdamState& state,
               const TrainConfig& cfg) {
  state.step += 1;
  const double t = static_cast<double>(state.step);
  // Fold the bias corrections into the step size: lr_t = lr *
  // sqrt(1 - beta2^t) / (1 - beta1^t), the usual reformulation.
  const double lr_t = cfg.learning_rate *
                      std::sqrt(1.0 - std::pow(TrainConfig::kBeta2, t)) /
                      (1.0 - std::pow(TrainConfig::kBeta1, t));
  std::size_t offset = 0;
  auto seg = [&](std::vector<double>& params, const std::vector<double>& g) {
    adam_update_segment({params.data(), params.size()}, {g.data(), g.size()},
                        {state.m.data() + offset, params.size()},
                        {state.v.data() + offset, params.size()}, lr_t,
                        TrainConfig::kBeta1, TrainConfig::kBeta2,
                        TrainConfig::kEpsilon);
    offset += params.size();
  };
  seg(model.w1, grad.w1);
  seg(model.b1, grad.b1);
  seg(model.w2, grad.w2);
  seg(model.b2, grad.b2);
}

double validation_accuracy(const MultiViewModel& model, const LoadedDataset& data,
                           std::span<const std::size_t> rows) {
  std::size_t correct = 0;
  for (std::size_t row : rows) {
    if (static_cast<int>(predict_row(model, data, row).predicted_class) ==
        data.labels[row]) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

}  // namespace

TrainResult train(const LoadedDataset& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.manifest.split.train.empty()) {
    throw validation_error("train: training split is empty");
  }
  if (data.views.empty()) throw validation_error("train: dataset has no views");
  const std::size_t k_count = data.class_count();
  if (k_count < 2) throw validation_error("train: need at least 2 classes");
  for (std::size_t row : data.manifest.split.train) {
    if (data.labels[row] < 0 || static_cast<std::size_t>(data.labels[row]) >= k_count) {
      throw validation_error("train: row " + std::to_string(row) +
                             " has label outside [0, K)");
    }
  }

  Rng rng(cfg.seed);
  TrainResult result;
  MultiViewModel& model = result.model;
  model.class_count = k_count;
  model.head = cfg.head;
  model.decision = cfg.decision;
  model.config = cfg;
  for (const Matrix& view : data.views) {
    model.views.push_back(ViewModel::init(view.cols, cfg.hidden_dim, k_count, rng));
    AdamState state;
    state.m.assign(model.views.back().parameter_count(), 0.0);
    state.v.assign(model.views.back().parameter_count(), 0.0);
    model.optimizer.push_back(std::move(state));
  }

  std::vector<std::size_t> order(data.manifest.split.train.begin(),
                                 data.manifest.split.train.end());
  const std::size_t view_count = model.views.size();

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const double lambda =
        cfg.head == HeadKind::kEvidential ? cfg.anneal.lambda_at(epoch) : 0.0;
    rng.shuffle(order);

    LossBreakdown epoch_sum;
    std::size_t epoch_terms = 0;

    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      const double inv_batch = 1.0 / static_cast<double>(stop - start);
      double batch_total = 0.0;

      for (std::size_t v = 0; v < view_count; ++v) {
        ViewModel& view_model = model.views[v];
        ViewGrad grad(view_model);

        for (std::size_t idx = start; idx < stop; ++idx) {
          const std::size_t row = order[idx];
          const std::size_t label = static_cast<std::size_t>(data.labels[row]);
          const std::span<const double> x = data.views[v].row(row);
          const ForwardTrace trace = forward_trace(view_model, x);
          for (double zk : trace.z) {
            if (!std::isfinite(zk)) {
              throw std::runtime_error(
                  "train: non-finite activations at epoch " + std::to_string(epoch) +
                  ", batch " + std::to_string(start / cfg.batch_size) +
                  "; lower the learning rate or check the input scale");
            }
          }
          std::vector<double> dz(k_count);

          if (cfg.head == HeadKind::kEvidential) {
            std::vector<double> alpha(k_count);
            for (std::size_t k = 0; k < k_count; ++k) {
              alpha[k] = softplus(trace.z[k]) + 1.0;
            }
            const LossBreakdown loss = total_loss_at_lambda(alpha, label, lambda);
            const std::vector<double> dalpha = loss_gradient(alpha, label, lambda);
            for (std::size_t k = 0; k < k_count; ++k) {
              dz[k] = dalpha[k] * sigmoid(trace.z[k]);
            }
            epoch_sum.adjusted_ce += loss.adjusted_ce;
            epoch_sum.kl += loss.kl;
            epoch_sum.total += loss.total;
            batch_total += loss.total;
          } else {
            const std::vector<double> p = softmax(trace.z);
            // Stable -log p_label via the log-sum-exp identity.
            const double zmax = *std::max_element(trace.z.begin(), trace.z.end());
            double lse = 0.0;
            for (double zk : trace.z) lse += std::exp(zk - zmax);
            const double ce = std::log(lse) + zmax - trace.z[label];
            for (std::size_t k = 0; k < k_count; ++k) {
              dz[k] = p[k] - (k == label ? 1.0 : 0.0);
            }
            epoch_sum.adjusted_ce += ce;
            epoch_sum.total += ce;
            batch_total += ce;
          }
          ++epoch_terms;

          accumulate_backward(view_model, x, trace, dz, grad);
        }

        grad.scale(inv_batch);
        adam_step(view_model, grad, model.optimizer[v], cfg);
      }

      if (!std::isfinite(batch_total)) {
        throw std::runtime_error(
            "train: non-finite loss at epoch " + std::to_string(epoch) +
            ", batch " + std::to_string(start / cfg.batch_size) +
            "; lower the learning rate or check the input scale");
      }
    }

    EpochLog entry;
    entry.epoch = epoch;
    const double inv_terms = 1.0 / static_cast<double>(epoch_terms);
    entry.mean_loss.adjusted_ce = epoch_sum.adjusted_ce * inv_terms;
    entry.mean_loss.kl = epoch_sum.kl * inv_terms;
    entry.mean_loss.lambda = lambda;
    entry.mean_loss.total = epoch_sum.total * inv_terms;
    if (!data.manifest.split.val.empty()) {
      entry.val_accuracy =
          validation_accuracy(model, data, data.manifest.split.val);
    }
    EVIDENT_LOG_DEBUG("epoch %d: mean total loss %.6f, val accuracy %s", epoch,
                      entry.mean_loss.total,
                      entry.val_accuracy ? std::to_string(*entry.val_accuracy).c_str()
                                         : "n/a");
    result.log.push_back(entry);
  }

  model.rng_state = rng.save_state();
  return result;
}

}  // namespace evident
