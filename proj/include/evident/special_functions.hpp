#pragma once

namespace evident {

// Digamma, trigamma and log-gamma for strictly positive arguments.
//
// All three use the same scheme: shift the argument above 10 with the
// recurrence relation, then evaluate the asymptotic (Bernoulli) series.
// Absolute error stays below 1e-12 over the library's operating range
// (Dirichlet parameters, so roughly x in [1e-3, 1e6]); at magnitudes
// where a double cannot resolve 1e-12 absolutely the results are
// correct to a few ulp.
//
// Implemented in-house so numeric behavior does not depend on the
// platform's libm.

// psi(x) = d/dx log Gamma(x). Throws validation_error for x <= 0 or
// non-finite x.
double digamma(double x);

// psi'(x), the first derivative of digamma. Same domain contract.
double trigamma(double x);

// log Gamma(x). Same domain contract.
double log_gamma(double x);

}  // namespace evident
