#include "evident/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evident/errors.hpp"

namespace evident {

namespace {

void check_pair(const DirichletOpinion& o1, const DirichletOpinion& o2) {
  o1.validate();
  o2.validate();
  if (o1.class_count() != o2.class_count()) {
    throw validation_error("fusion: class counts differ (" +
                           std::to_string(o1.class_count()) + " vs " +
                           std::to_string(o2.class_count()) + ")");
  }
}

// Renormalizes raw masses into an opinion and fills the outcome fields.
FusionOutcome finish(std::vector<double> raw_beliefs, double raw_uncertainty,
                     double conflict, FusionRule rule) {
  double total = raw_uncertainty;
  for (double b : raw_beliefs) total += b;
  FusionOutcome out;
  out.rule = rule;
  out.conflict = conflict;
  out.normalizer = total;
  out.opinion.beliefs = std::move(raw_beliefs);
  for (double& b : out.opinion.beliefs) b /= total;
  out.opinion.uncertainty = raw_uncertainty / total;
  if (out.opinion.uncertainty > 0.0) {
    out.recovered_evidence = evidence_from_opinion(out.opinion);
  }
  return out;
}

}  // namespace

std::string to_string(FusionRule rule) {
  return rule == FusionRule::kIder ? "ider" : "ds";
}

FusionRule fusion_rule_from_string(const std::string& name) {
  if (name == "ider") return FusionRule::kIder;
  if (name == "ds") return FusionRule::kDs;
  throw validation_error("unknown fusion rule '" + name + "' (expected ider|ds)");
}

CrfWeights crf_weights(const DirichletOpinion& o1, const DirichletOpinion& o2) {
  check_pair(o1, o2);
  CrfWeights w;
  w.belief_weights.resize(o1.class_count());
  for (std::size_t k = 0; k < o1.class_count(); ++k) {
    w.belief_weights[k] = 0.5 * (o1.beliefs[k] + o2.beliefs[k]);
  }
  w.uncertainty_weight = 0.5 * (o1.uncertainty + o2.uncertainty);
  return w;
}

double conflict_mass(const DirichletOpinion& o1, const DirichletOpinion& o2) {
  check_pair(o1, o2);
  double sum1 = 0.0, sum2 = 0.0, aligned = 0.0;
  for (std::size_t k = 0; k < o1.class_count(); ++k) {
    sum1 += o1.beliefs[k];
    sum2 += o2.beliefs[k];
    aligned += o1.beliefs[k] * o2.beliefs[k];
  }
  // sum_{i != j} b_i^1 b_j^2, clamped against rounding at the boundaries.
  double c = sum1 * sum2 - aligned;
  if (c < 0.0) c = 0.0;
  if (c > 1.0) c = 1.0;
  return c;
}

FusionOutcome ider_combine_pair(const DirichletOpinion& o1,
                                const DirichletOpinion& o2) {
  check_pair(o1, o2);
  const std::size_t k_count = o1.class_count();
  std::vector<double> raw(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const double b1 = o1.beliefs[k];
    const double b2 = o2.beliefs[k];
    // The cross terms are summed symmetrically first so swapping the
    // arguments reproduces the result bit for bit.
    const double cross = b1 * o2.uncertainty + b2 * o1.uncertainty;
    const double redistributed = 0.5 * (b1 + b2);
    raw[k] = b1 * b2 + cross + redistributed;
  }
  const double raw_u =
      o1.uncertainty * o2.uncertainty + 0.5 * (o1.uncertainty + o2.uncertainty);
  return finish(std::move(raw), raw_u, conflict_mass(o1, o2), FusionRule::kIder);
}

FusionOutcome ds_combine_pair(const DirichletOpinion& o1,
                              const DirichletOpinion& o2) {
  check_pair(o1, o2);
  const double c = conflict_mass(o1, o2);
  if (c >= 1.0) {
    throw validation_error(
        "ds_combine_pair: total conflict (C = 1) leaves no agreeing mass to "
        "normalize; the combination is undefined for fully divided certain "
        "opinions");
  }
  const std::size_t k_count = o1.class_count();
  std::vector<double> raw(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const double b1 = o1.beliefs[k];
    const double b2 = o2.beliefs[k];
    raw[k] = b1 * b2 + b1 * o2.uncertainty + b2 * o1.uncertainty;
  }
  const double raw_u = o1.uncertainty * o2.uncertainty;
  return finish(std::move(raw), raw_u, c, FusionRule::kDs);
}

namespace {

FusionOutcome fold_combine(std::span<const DirichletOpinion> opinions,
                           FusionRule rule) {
  if (opinions.empty()) {
    throw validation_error("combine_all: need at least one opinion");
  }
  for (const auto& o : opinions) o.validate();
  for (std::size_t v = 1; v < opinions.size(); ++v) {
    if (opinions[v].class_count() != opinions[0].class_count()) {
      throw validation_error("combine_all: opinion " + std::to_string(v) +
                             " has class count " +
                             std::to_string(opinions[v].class_count()) +
                             ", expected " +
                             std::to_string(opinions[0].class_count()));
    }
  }

  FusionOutcome out;
  out.rule = rule;
  out.opinion = opinions[0];
  out.conflict = 0.0;
  out.normalizer = 1.0;
  if (out.opinion.uncertainty > 0.0) {
    out.recovered_evidence = evidence_from_opinion(out.opinion);
  }
  for (std::size_t v = 1; v < opinions.size(); ++v) {
    FusionOutcome step = rule == FusionRule::kIder
                             ? ider_combine_pair(out.opinion, opinions[v])
                             : ds_combine_pair(out.opinion, opinions[v]);
    step.conflict = std::max(step.conflict, out.conflict);
    out = std::move(step);
  }
  return out;
}

}  // namespace

FusionOutcome ider_combine_all(std::span<const DirichletOpinion> opinions) {
  return fold_combine(opinions, FusionRule::kIder);
}

FusionOutcome ds_combine_all(std::span<const DirichletOpinion> opinions) {
  return fold_combine(opinions, FusionRule::kDs);
}

FusionOutcome combine_all(std::span<const DirichletOpinion> opinions,
                          FusionRule rule) {
  return fold_combine(opinions, rule);
}

}  // namespace evident
