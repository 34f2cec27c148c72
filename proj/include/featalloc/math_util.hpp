#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

namespace featalloc {

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

inline double beta_fn(double a, double b) { return std::exp(log_beta(a, b)); }

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Upper tail of the chi-square distribution with df degrees of freedom.
inline double chi2_sf(double x, double df) { return 1.0 - gamma_p(df / 2.0, x / 2.0); }

/// Composite Gauss-Legendre quadrature of f on [lo, hi] with `segments`
/// equal subintervals, 16 nodes each.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 std::size_t segments = 64);

}  // namespace featalloc
