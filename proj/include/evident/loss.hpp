#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace evident {

// Annealing weight on the KL regularizer. Ramps linearly so the
// regularizer does not flatten the evidence heads before they have
// learned anything: lambda(epoch) = lambda_max * min(1, epoch / ramp).
struct AnnealSchedule {
  double lambda_max = 1.0;
  int ramp_epochs = 10;

  double lambda_at(int epoch) const;
  void validate() const;
};

struct LossBreakdown {
  double adjusted_ce = 0.0;
  double kl = 0.0;
  double lambda = 0.0;
  double total = 0.0;
};

// Expected cross-entropy under the Dirichlet with parameters alpha:
// psi(S) - psi(alpha_label), S = sum alpha. Requires every alpha_k >= 1
// (the evidence parameterization) and label < K.
double adjusted_ce(std::span<const double> alpha, std::size_t label);

// Removes the ground-truth class's evidence: alpha_label -> 1, the rest
// unchanged. The KL regularizer is applied to this adjusted vector so
// correct-class evidence is never pushed toward zero.
std::vector<double> masked_alpha(std::span<const double> alpha, std::size_t label);

// KL( Dir(alpha_tilde) || Dir(1,...,1) ), always >= 0 and zero exactly
// at alpha_tilde = (1,...,1).
double kl_to_uniform(std::span<const double> alpha_tilde);

// adjusted_ce + lambda(epoch) * kl_to_uniform(masked_alpha).
LossBreakdown total_loss(std::span<const double> alpha, std::size_t label,
                         const AnnealSchedule& schedule, int epoch);

// Same with an explicit lambda.
LossBreakdown total_loss_at_lambda(std::span<const double> alpha,
                                   std::size_t label, double lambda);

// Analytic d(total)/d(alpha_k):
//   adjusted CE:   psi'(S) - [k == label] psi'(alpha_label)
//   KL (k != label): (alpha_k - 1) psi'(alpha_k) - psi'(S~) (S~ - K)
// where S~ sums the masked vector. The label entry gets no KL gradient
// because masking pins it to 1.
std::vector<double> loss_gradient(std::span<const double> alpha,
                                  std::size_t label, double lambda);

}  // namespace evident
