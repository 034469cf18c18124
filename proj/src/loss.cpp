#include "evident/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evident/errors.hpp"
#include "evident/special_functions.hpp"

namespace evident {

namespace {

void check_alpha(std::span<const double> alpha, const char* what) {
  if (alpha.size() < 2) {
    throw validation_error(std::string(what) + ": need at least 2 classes, got " +
                           std::to_string(alpha.size()));
  }
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (!std::isfinite(alpha[k]) || alpha[k] < 1.0) {
      throw validation_error(std::string(what) + ": alpha[" + std::to_string(k) +
                             "] must be finite and >= 1, got " +
                             std::to_string(alpha[k]));
    }
  }
}

void check_label(std::span<const double> alpha, std::size_t label,
                 const char* what) {
  if (label >= alpha.size()) {
    throw validation_error(std::string(what) + ": label " + std::to_string(label) +
                           " out of range for " + std::to_string(alpha.size()) +
                           " classes");
  }
}

}  // namespace

double AnnealSchedule::lambda_at(int epoch) const {
  validate();
  if (epoch < 0) throw validation_error("AnnealSchedule: negative epoch");
  const double ramp = static_cast<double>(epoch) / static_cast<double>(ramp_epochs);
  return lambda_max * std::min(1.0, ramp);
}

void AnnealSchedule::validate() const {
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) {
    throw validation_error("AnnealSchedule: lambda_max must be > 0");
  }
  if (ramp_epochs < 1) {
    throw validation_error("AnnealSchedule: ramp_epochs must be >= 1");
  }
}

double adjusted_ce(std::span<const double> alpha, std::size_t label) {
  check_alpha(alpha, "adjusted_ce");
  check_label(alpha, label, "adjusted_ce");
  double s = 0.0;
  for (double a : alpha) s += a;
  return digamma(s) - digamma(alpha[label]);
}

std::vector<double> masked_alpha(std::span<const double> alpha, std::size_t label) {
  check_alpha(alpha, "masked_alpha");
  check_label(alpha, label, "masked_alpha");
  std::vector<double> tilde(alpha.begin(), alpha.end());
  tilde[label] = 1.0;
  return tilde;
}

double kl_to_uniform(std::span<const double> alpha_tilde) {
  check_alpha(alpha_tilde, "kl_to_uniform");
  const std::size_t k_count = alpha_tilde.size();
  double s = 0.0;
  for (double a : alpha_tilde) s += a;

  double value = log_gamma(s) - log_gamma(static_cast<double>(k_count));
  const double psi_s = digamma(s);
  for (double a : alpha_tilde) {
    value -= log_gamma(a);
    value += (a - 1.0) * (digamma(a) - psi_s);
  }
  // Exact zero at the uniform parameters; rounding may leave a tiny
  // negative residue otherwise.
  return std::max(0.0, value);
}

LossBreakdown total_loss_at_lambda(std::span<const double> alpha,
                                   std::size_t label, double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw validation_error("total_loss: lambda must be finite and >= 0");
  }
  LossBreakdown out;
  out.adjusted_ce = adjusted_ce(alpha, label);
  out.kl = kl_to_uniform(masked_alpha(alpha, label));
  out.lambda = lambda;
  out.total = out.adjusted_ce + lambda * out.kl;
  return out;
}

LossBreakdown total_loss(std::span<const double> alpha, std::size_t label,
                         const AnnealSchedule& schedule, int epoch) {
  return total_loss_at_lambda(alpha, label, schedule.lambda_at(epoch));
}

std::vector<double> loss_gradient(std::span<const double> alpha,
                                  std::size_t label, double lambda) {
  check_alpha(alpha, "loss_gradient");
  check_label(alpha, label, "loss_gradient");
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw validation_error("loss_gradient: lambda must be finite and >= 0");
  }
  const std::size_t k_count = alpha.size();
  double s = 0.0;
  for (double a : alpha) s += a;

  // Masked strength S~ = sum of alpha with the label entry set to 1.
  const double s_tilde = s - alpha[label] + 1.0;
  const double psi1_s = trigamma(s);
  const double psi1_s_tilde = trigamma(s_tilde);
  const double excess = s_tilde - static_cast<double>(k_count);

  std::vector<double> grad(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    double g = psi1_s;
    if (k == label) {
      g -= trigamma(alpha[k]);
    } else if (lambda > 0.0) {
      g += lambda * ((alpha[k] - 1.0) * trigamma(alpha[k]) - psi1_s_tilde * excess);
    }
    grad[k] = g;
  }
  return grad;
}

}  // namespace evident
