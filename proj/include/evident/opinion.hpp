#pragma once

#include <cstddef>
#include <vector>

namespace evident {

// Tolerance used everywhere a unit-sum or probability invariant is checked.
inline constexpr double kUnitTolerance = 1e-9;

// Per-class non-negative evidence counts collected by a classifier head.
// The induced Dirichlet parameters are alpha_k = values[k] + 1.
struct Evidence {
  std::vector<double> values;

  std::size_t class_count() const { return values.size(); }

  // Entries must be finite and >= 0, and there must be at least two
  // classes. Throws validation_error naming the offending index.
  void validate() const;
};

// Subjective-logic opinion over K classes: belief masses plus an explicit
// uncertainty mass, all non-negative and summing to one.
struct DirichletOpinion {
  std::vector<double> beliefs;
  double uncertainty = 1.0;

  std::size_t class_count() const { return beliefs.size(); }

  void validate() const;
};

// Expected class probabilities alpha_k / S of the Dirichlet opinion.
struct ClassProbabilities {
  std::vector<double> probs;

  std::size_t class_count() const { return probs.size(); }

  void validate() const;
};

// Dirichlet strength S = sum_k (e_k + 1).
double dirichlet_strength(const Evidence& e);

// Maps evidence to an opinion: b_k = e_k / S, u = K / S.
// Zero evidence yields the vacuous opinion (b = 0, u = 1).
DirichletOpinion opinion_from_evidence(const Evidence& e);

// Inverse map: S = K / u, e_k = max(0, b_k * S). Requires u > 0; a fully
// certain opinion has no finite evidence representation ("infinite
// Dirichlet strength") and throws validation_error. The clamp guards the
// non-negativity of evidence against rounding; for valid opinions it
// never changes the value, so the round trip through
// opinion_from_evidence is the identity.
Evidence evidence_from_opinion(const DirichletOpinion& o);

// p_k = (e_k + 1) / S. Dominates the belief mass elementwise.
ClassProbabilities expected_probabilities(const Evidence& e);

// Index of the largest belief; ties break to the lowest class index.
std::size_t argmax_class(const std::vector<double>& scores);

}  // namespace evident
