#pragma once

#include <cstddef>
#include <vector>

namespace featalloc {

/// Finite discrete distribution on {offset, offset+1, ..., offset+N}.
struct Pmf {
    std::vector<double> probs;  // indexed from support_offset
    int support_offset = 0;

    double mean() const;
    double variance() const;
    /// Renormalizes in place; throws NumericError if total mass is zero.
    void normalize();
};

/// Success probabilities of independent Bernoulli trials; each in [0, 1].
struct SuccessProbs {
    std::vector<double> lambdas;
};

/// Exact Poisson-binomial PMF on {0, ..., n} by iterative convolution.
Pmf poisson_binomial_pmf(const SuccessProbs& sp);

/// Exponential tilt: entry m becomes proportional to g^m * pmf(m).
/// Tilting acts on m counted from the support offset.
Pmf tilt_pmf(const Pmf& pmf, double g);

/// Poisson(trace_sum) truncated where the right tail mass drops below
/// tail_eps, then renormalized.
Pmf le_cam_pmf(double trace_sum, double tail_eps = 1e-12);

/// Negative binomial PMF: number of failures before r successes, success
/// probability p. q(m) = Gamma(r+m)/(Gamma(r) m!) p^r (1-p)^m, truncated
/// at cumulative tail < tail_eps.
Pmf negbin_pmf(double r, double p, double tail_eps = 1e-12);

/// Total variation distance; supports may differ in offset and length.
double total_variation(const Pmf& a, const Pmf& b);

}  // namespace featalloc
