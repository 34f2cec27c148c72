#pragma once

#include <string>

#include "featalloc/poibin.hpp"
#include "featalloc/priors.hpp"
#include "featalloc/simulate.hpp"

namespace featalloc {

/// Independent beta posteriors of the observed feature weights.
struct WeightPosterior {
    struct BetaParams {
        double a;
        double b;
        double mean() const { return a / (a + b); }
    };
    std::vector<BetaParams> per_feature;
};

/// Law of the features first revealed by the next observation: a count
/// distribution plus a location descriptor (always iid from the base
/// measure for the exchangeable-label families).
struct NewFeatureLaw {
    Pmf count_law;
    std::string location_law = "iid_G0";
    std::string depends_on;  // "n", "n,k", or "n,k,m"
};

double crm_log_marginal(const BetaLevy& levy, const FeatureSample& sample);

WeightPosterior crm_weight_posterior(const BetaLevy& levy,
                                     const FeatureSample& sample);

/// Poisson(lambda_n) new-feature law. Takes only (levy, n): the predictive
/// under a Poisson prior depends on the sample through n alone.
NewFeatureLaw crm_predictive_new(const BetaLevy& levy, int n,
                                 double tail_eps = 1e-12);

/// Unseen-feature count over the next m observations:
/// Poisson(sum_{i=n}^{n+m-1} lambda_i). Derived telescoping convenience.
NewFeatureLaw crm_predictive_future(const BetaLevy& levy, int n, int m,
                                    double tail_eps = 1e-12);

GammaMixing mp_posterior_gamma(const GammaMixing& mixing, const BetaLevy& levy,
                               const FeatureSample& sample);

/// NegBinomial(a0 + k, (b0 + phi_n)/(b0 + phi_n + lambda_n)). Takes only
/// (priors, n, k).
NewFeatureLaw mp_predictive_new(const GammaMixing& mixing, const BetaLevy& levy,
                                int n, int k, double tail_eps = 1e-12);

/// Posterior count of unseen features under the mixed binomial prior.
/// Closed forms for Poisson and negative binomial count laws; the generic
/// tilted-sum path is exposed for cross-checking.
Pmf mb_posterior_count(const CountLaw& count, const BetaMarkLaw& mark, int n,
                       int k);
Pmf mb_posterior_count_generic(const CountLaw& count, const BetaMarkLaw& mark,
                               int n, int k);

NewFeatureLaw mb_predictive_new(const CountLaw& count, const BetaMarkLaw& mark,
                                int n, int k);
Pmf mb_predictive_new_generic(const CountLaw& count, const BetaMarkLaw& mark,
                              int n, int k);

/// P(next observation re-displays feature l) = posterior mean weight.
std::vector<double> crm_old_feature_probs(const BetaLevy& levy,
                                          const FeatureSample& sample);

}  // namespace featalloc
