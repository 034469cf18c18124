#include "evident/opinion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evident/errors.hpp"

namespace evident {

namespace {

void check_class_count(std::size_t k, const char* what) {
  if (k < 2) {
    throw validation_error(std::string(what) + ": need at least 2 classes, got " +
                           std::to_string(k));
  }
}

}  // namespace

void Evidence::validate() const {
  check_class_count(values.size(), "Evidence");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw validation_error("Evidence: entry " + std::to_string(i) +
                             " must be finite and >= 0, got " +
                             std::to_string(values[i]));
    }
  }
}

void DirichletOpinion::validate() const {
  check_class_count(beliefs.size(), "DirichletOpinion");
  double sum = uncertainty;
  if (!std::isfinite(uncertainty) || uncertainty < 0.0) {
    throw validation_error("DirichletOpinion: uncertainty must be finite and >= 0, got " +
                           std::to_string(uncertainty));
  }
  for (std::size_t i = 0; i < beliefs.size(); ++i) {
    if (!std::isfinite(beliefs[i]) || beliefs[i] < 0.0) {
      throw validation_error("DirichletOpinion: belief " + std::to_string(i) +
                             " must be finite and >= 0, got " +
                             std::to_string(beliefs[i]));
    }
    sum += beliefs[i];
  }
  if (std::abs(sum - 1.0) > kUnitTolerance) {
    throw validation_error("DirichletOpinion: beliefs and uncertainty must sum to 1, got " +
                           std::to_string(sum));
  }
}

void ClassProbabilities::validate() const {
  check_class_count(probs.size(), "ClassProbabilities");
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!std::isfinite(probs[i]) || probs[i] < 0.0) {
      throw validation_error("ClassProbabilities: entry " + std::to_string(i) +
                             " must be finite and >= 0, got " +
                             std::to_string(probs[i]));
    }
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > kUnitTolerance) {
    throw validation_error("ClassProbabilities: entries must sum to 1, got " +
                           std::to_string(sum));
  }
}

double dirichlet_strength(const Evidence& e) {
  double s = static_cast<double>(e.values.size());
  for (double v : e.values) s += v;
  return s;
}

DirichletOpinion opinion_from_evidence(const Evidence& e) {
  e.validate();
  const double s = dirichlet_strength(e);
  DirichletOpinion o;
  o.beliefs.resize(e.values.size());
  for (std::size_t k = 0; k < e.values.size(); ++k) {
    o.beliefs[k] = e.values[k] / s;
  }
  o.uncertainty = static_cast<double>(e.values.size()) / s;
  return o;
}

Evidence evidence_from_opinion(const DirichletOpinion& o) {
  o.validate();
  if (o.uncertainty <= 0.0) {
    throw validation_error(
        "evidence_from_opinion: uncertainty = 0 means infinite Dirichlet "
        "strength; the opinion has no finite evidence representation");
  }
  const double s = static_cast<double>(o.beliefs.size()) / o.uncertainty;
  Evidence e;
  e.values.resize(o.beliefs.size());
  for (std::size_t k = 0; k < o.beliefs.size(); ++k) {
    e.values[k] = std::max(0.0, o.beliefs[k] * s);
  }
  return e;
}

ClassProbabilities expected_probabilities(const Evidence& e) {
  e.validate();
  const double s = dirichlet_strength(e);
  ClassProbabilities p;
  p.probs.resize(e.values.size());
  for (std::size_t k = 0; k < e.values.size(); ++k) {
    p.probs[k] = (e.values[k] + 1.0) / s;
  }
  return p;
}

std::size_t argmax_class(const std::vector<double>& scores) {
  if (scores.empty()) throw validation_error("argmax_class: empty score vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

}  // namespace evident
