#include "evident/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "evident/errors.hpp"

namespace evident {

namespace {

constexpr double kShift = 10.0;

void check_domain(const char* name, double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw validation_error(std::string(name) + " requires finite x > 0, got " +
                           std::to_string(x));
  }
}

}  // namespace

double digamma(double x) {
  check_domain("digamma", x);
  // psi(x) = psi(x + 1) - 1/x
  double acc = 0.0;
  while (x < kShift) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  // psi(x) ~ ln x - 1/(2x) - sum B_{2n} / (2n x^{2n});
  // truncation after x^{-12} leaves < 1e-15 at x >= 10.
  const double inv = 1.0 / x;
  const double t = inv * inv;
  const double series =
      t * (1.0 / 12.0 -
           t * (1.0 / 120.0 -
                t * (1.0 / 252.0 -
                     t * (1.0 / 240.0 -
                          t * (1.0 / 132.0 - t * (691.0 / 32760.0))))));
  return acc + std::log(x) - 0.5 * inv - series;
}

double trigamma(double x) {
  check_domain("trigamma", x);
  // psi'(x) = psi'(x + 1) + 1/x^2
  double acc = 0.0;
  while (x < kShift) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  // psi'(x) ~ 1/x + 1/(2x^2) + sum B_{2n} / x^{2n+1}
  const double inv = 1.0 / x;
  const double t = inv * inv;
  const double series =
      inv * t *
      (1.0 / 6.0 -
       t * (1.0 / 30.0 -
            t * (1.0 / 42.0 -
                 t * (1.0 / 30.0 -
                      t * (5.0 / 66.0 - t * (691.0 / 2730.0))))));
  return acc + inv + 0.5 * t + series;
}

double log_gamma(double x) {
  check_domain("log_gamma", x);
  // lgamma(x) = lgamma(x + n) - sum ln(x + i)
  double acc = 0.0;
  while (x < kShift) {
    acc -= std::log(x);
    x += 1.0;
  }
  // Stirling with Bernoulli corrections B_{2n} / (2n (2n-1) x^{2n-1}).
  const double inv = 1.0 / x;
  const double t = inv * inv;
  const double series =
      inv * (1.0 / 12.0 -
             t * (1.0 / 360.0 -
                  t * (1.0 / 1260.0 -
                       t * (1.0 / 1680.0 -
                            t * (1.0 / 1188.0 - t * (691.0 / 360360.0))))));
  const double half_log_two_pi = 0.5 * std::log(2.0 * std::numbers::pi);
  return acc + (x - 0.5) * std::log(x) - x + half_log_two_pi + series;
}

}  // namespace evident
