#pragma once

#include <array>
#include <functional>

#include "featalloc/infer_crm.hpp"
#include "featalloc/infer_dpp.hpp"
#include "featalloc/simulate.hpp"

namespace featalloc {

struct FitResult {
    double a, b, rho, alpha;
    double log_marginal;
    bool converged;
    int iterations;
};

struct FitInit {
    double a = 1.0;
    double b = 1.0;
    double rho = 50.0;
    double alpha = 0.05;
    bool fix_marks = false;  // hold (a, b) at the initial values
};

/// Maximizes the marked-DPP marginal likelihood over (a, b, rho, alpha) by
/// Nelder-Mead in an unconstrained reparameterization (logs, plus the logit
/// of rho*pi*alpha^2 so the existence condition holds by construction).
/// With init.fix_marks the mark parameters stay at (init.a, init.b) and only
/// the kernel parameters are optimized.
FitResult fit_empirical_bayes(const FeatureSample& sample, const Rect& region,
                              int ng, const FitInit& init = {},
                              int budget = 400);

/// Log posterior density of the stability parameter of the three-parameter
/// beta prior, up to a constant:
/// -gamma*phi_n(a) + sum_l log[gamma*B(m_l - a, n - m_l + beta + a)]
/// + log prior_density(a). Returns -inf outside (0,1).
double alpha_log_posterior(double a, const FeatureSample& sample, double gamma,
                           double beta,
                           const std::function<double(double)>& prior_density);

struct AlphaChain {
    std::vector<double> draws;  // post burn-in
    double acceptance_rate;
};

/// Random-walk Metropolis on logit(alpha) with Gaussian proposals; 20%
/// burn-in discarded.
AlphaChain alpha_metropolis(const FeatureSample& sample, double gamma,
                            double beta,
                            const std::function<double(double)>& prior_density,
                            int n_iter, double step, Rng& rng);

/// Posterior predictive new-feature count: mixture over chain draws of
/// Poisson(lambda_n(alpha)). Depends on the full frequency spectrum through
/// the chain's target.
NewFeatureLaw random_alpha_predictive(const AlphaChain& chain,
                                      const BetaLevy& levy_template, int n);

}  // namespace featalloc
