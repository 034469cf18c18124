#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evident/opinion.hpp"

namespace evident {

enum class FusionRule { kIder, kDs };

std::string to_string(FusionRule rule);
FusionRule fusion_rule_from_string(const std::string& name);

// Per-component average of two opinions. Redistributes disputed mass
// impartially: each weight is the mean of the two inputs' corresponding
// component, so the weights themselves sum to one.
struct CrfWeights {
  std::vector<double> belief_weights;
  double uncertainty_weight = 0.0;
};

// Result of combining opinions.
//
// `recovered_evidence` is the inverse Dirichlet map of the fused opinion;
// it is absent when the fused uncertainty is zero (two identical fully
// certain inputs), because such an opinion has no finite evidence.
//
// `conflict` is the pairwise conflict mass C = sum_{i != j} b_i^1 b_j^2;
// for multi-view combination it is the largest conflict seen across the
// pairwise steps. `normalizer` is the total pre-normalization mass the
// raw combined components were divided by (for the ider rule N = 2 - C,
// for ds N = 1 - C; for a single-view pass-through it is 1).
struct FusionOutcome {
  DirichletOpinion opinion;
  std::optional<Evidence> recovered_evidence;
  double conflict = 0.0;
  double normalizer = 1.0;
  FusionRule rule = FusionRule::kIder;
};

CrfWeights crf_weights(const DirichletOpinion& o1, const DirichletOpinion& o2);

// C = sum_{i != j} b_i^1 b_j^2, in [0, 1]. Zero for agreeing certain
// opinions, one for totally disjoint certain opinions.
double conflict_mass(const DirichletOpinion& o1, const DirichletOpinion& o2);

// Impartial pairwise combination:
//   raw b_k = b_k^1 b_k^2 + b_k^1 u^2 + b_k^2 u^1 + mean(b_k^1, b_k^2)
//   raw u   = u^1 u^2 + mean(u^1, u^2)
// The raw masses total 2 - C, so they are divided by that normalizer to
// restore the unit-sum opinion invariant. Symmetric in its arguments
// (bitwise, by construction).
FusionOutcome ider_combine_pair(const DirichletOpinion& o1,
                                const DirichletOpinion& o2);

// Reduced Dempster combination over opinions:
//   b_k = (b_k^1 b_k^2 + b_k^1 u^2 + b_k^2 u^1) / (1 - C), u = u^1 u^2 / (1 - C)
// Throws validation_error when C = 1 (total conflict leaves nothing to
// normalize). The vacuous opinion is its neutral element.
FusionOutcome ds_combine_pair(const DirichletOpinion& o1,
                              const DirichletOpinion& o2);

// Left-to-right fold of ider_combine_pair in the given view order,
// normalizing after every step. The combination is not associative, so
// the order is part of the contract. A single opinion passes through
// unchanged. Throws validation_error on an empty list.
FusionOutcome ider_combine_all(std::span<const DirichletOpinion> opinions);

// Left-to-right fold of ds_combine_pair; same conventions as above.
FusionOutcome ds_combine_all(std::span<const DirichletOpinion> opinions);

// Dispatch on rule; used by the CLI and the multi-view classifier.
FusionOutcome combine_all(std::span<const DirichletOpinion> opinions,
                          FusionRule rule);

}  // namespace evident
