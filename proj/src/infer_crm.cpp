#include "featalloc/infer_crm.hpp"

#include <cmath>
#include <stdexcept>

#include "featalloc/errors.hpp"
#include "featalloc/math_util.hpp"

namespace featalloc {

namespace {

double log_g0_uniform(const Rect& region, const Point& p) {
    if (!region.contains(p)) {
        throw DataError("feature location outside the base-measure support");
    }
    return -std::log(region.area());
}

// Probability mass of the prior count law up to negligible tail, with the
// first `skip` entries dropped (used for the factorial-moment reweighting).
std::vector<double> count_law_pmf(const CountLaw& count, int skip,
                                  double tail_eps = 1e-12) {
    Pmf base;
    if (const auto* poi = std::get_if<PoissonCount>(&count)) {
        base = le_cam_pmf(poi->lambda, tail_eps);
    } else {
        const auto& nb = std::get<NegBinCount>(count);
        base = negbin_pmf(nb.r, nb.p, tail_eps);
    }
    if (skip >= static_cast<int>(base.probs.size())) {
        throw DataError(
            "count law places no mass on counts >= k; the posterior is "
            "undefined for this sample");
    }
    return {base.probs.begin() + skip, base.probs.end()};
}

double mean_weight_integral(const BetaMarkLaw& mark, int n) {
    // int s (1-s)^n Beta(a,b)(ds) = B(a+1, b+n) / B(a, b)
    return std::exp(log_beta(mark.a + 1.0, mark.b + n) -
                    log_beta(mark.a, mark.b));
}

}  // namespace

double crm_log_marginal(const BetaLevy& levy, const FeatureSample& sample) {
    double acc = -varphi_n(levy, sample.n);
    for (const auto& f : sample.features) {
        acc += std::log(feature_factor(levy, f.count, sample.n));
        acc += log_g0_uniform(levy.region, f.location);
    }
    return acc;
}

WeightPosterior crm_weight_posterior(const BetaLevy& levy,
                                     const FeatureSample& sample) {
    WeightPosterior wp;
    wp.per_feature.reserve(sample.features.size());
    for (const auto& f : sample.features) {
        wp.per_feature.push_back(
            {f.count - levy.alpha, sample.n - f.count + levy.beta + levy.alpha});
    }
    return wp;
}

NewFeatureLaw crm_predictive_new(const BetaLevy& levy, int n, double tail_eps) {
    NewFeatureLaw law;
    law.count_law = le_cam_pmf(new_feature_rate(levy, n), tail_eps);
    law.depends_on = "n";
    return law;
}

NewFeatureLaw crm_predictive_future(const BetaLevy& levy, int n, int m,
                                    double tail_eps) {
    if (m < 1) throw std::domain_error("crm_predictive_future: need m >= 1");
    double rate = 0.0;
    for (int i = n; i < n + m; ++i) rate += new_feature_rate(levy, i);
    NewFeatureLaw law;
    law.count_law = le_cam_pmf(rate, tail_eps);
    law.depends_on = "n";
    return law;
}

GammaMixing mp_posterior_gamma(const GammaMixing& mixing, const BetaLevy& levy,
                               const FeatureSample& sample) {
    return GammaMixing(mixing.shape + sample.k(),
                       mixing.rate + varphi_n(levy, sample.n));
}

NewFeatureLaw mp_predictive_new(const GammaMixing& mixing, const BetaLevy& levy,
                                int n, int k, double tail_eps) {
    const double phi = varphi_n(levy, n);
    const double lam = new_feature_rate(levy, n);
    NewFeatureLaw law;
    law.depends_on = "n,k";
    if (lam <= 0.0) {
        law.count_law = Pmf{{1.0}, 0};
        return law;
    }
    const double p = (mixing.rate + phi) / (mixing.rate + phi + lam);
    law.count_law = negbin_pmf(mixing.shape + k, p, tail_eps);
    return law;
}

Pmf mb_posterior_count(const CountLaw& count, const BetaMarkLaw& mark, int n,
                       int k) {
    const double kappa = kappa_g(mark, n);
    if (const auto* poi = std::get_if<PoissonCount>(&count)) {
        return le_cam_pmf(poi->lambda * kappa);
    }
    const auto& nb = std::get<NegBinCount>(count);
    return negbin_pmf(nb.r + k, 1.0 - kappa * (1.0 - nb.p));
}

Pmf mb_posterior_count_generic(const CountLaw& count, const BetaMarkLaw& mark,
                               int n, int k) {
    const double kappa = kappa_g(mark, n);
    const std::vector<double> qm = count_law_pmf(count, k);
    std::vector<double> probs(qm.size());
    // q(m) propto kappa^m q_M(m+k) (m+k)!/m!, in log space
    double max_log = -1e300;
    std::vector<double> logs(qm.size(), -1e300);
    for (std::size_t m = 0; m < qm.size(); ++m) {
        if (qm[m] <= 0.0) continue;
        logs[m] = m * std::log(kappa) + std::log(qm[m]) +
                  std::lgamma(static_cast<double>(m + k) + 1.0) -
                  std::lgamma(static_cast<double>(m) + 1.0);
        max_log = std::max(max_log, logs[m]);
    }
    for (std::size_t m = 0; m < qm.size(); ++m) {
        probs[m] = std::exp(logs[m] - max_log);
    }
    Pmf out{std::move(probs), 0};
    out.normalize();
    return out;
}

NewFeatureLaw mb_predictive_new(const CountLaw& count, const BetaMarkLaw& mark,
                                int n, int k) {
    const double t = mean_weight_integral(mark, n);
    NewFeatureLaw law;
    law.depends_on = "n,k";
    if (const auto* poi = std::get_if<PoissonCount>(&count)) {
        law.count_law = le_cam_pmf(poi->lambda * t);
        return law;
    }
    const auto& nb = std::get<NegBinCount>(count);
    const double kappa = kappa_g(mark, n);
    const double p_prime = 1.0 - kappa * (1.0 - nb.p);
    const double p_th = p_prime / (p_prime + (1.0 - nb.p) * t);
    law.count_law = negbin_pmf(nb.r + k, p_th);
    return law;
}

Pmf mb_predictive_new_generic(const CountLaw& count, const BetaMarkLaw& mark,
                              int n, int k) {
    const double kappa = kappa_g(mark, n);
    const double cp = mark.a / (mark.a + mark.b + n);
    const std::vector<double> qm = count_law_pmf(count, k);
    const std::size_t zmax = qm.size();
    std::vector<double> weight(zmax);  // kappa^z q_M(z+k) (z+k)!/z!
    for (std::size_t z = 0; z < zmax; ++z) {
        if (qm[z] <= 0.0) continue;
        weight[z] = std::exp(z * std::log(kappa) + std::log(qm[z]) +
                             std::lgamma(static_cast<double>(z + k) + 1.0) -
                             std::lgamma(static_cast<double>(z) + 1.0));
    }
    std::vector<double> probs(zmax, 0.0);
    for (std::size_t m = 0; m < zmax; ++m) {
        double acc = 0.0;
        for (std::size_t z = m; z < zmax; ++z) {
            if (weight[z] <= 0.0) continue;
            const double log_binom =
                std::lgamma(static_cast<double>(z) + 1.0) -
                std::lgamma(static_cast<double>(m) + 1.0) -
                std::lgamma(static_cast<double>(z - m) + 1.0);
            acc += weight[z] * std::exp(log_binom + m * std::log(cp) +
                                        (z - m) * std::log1p(-cp));
        }
        probs[m] = acc;
    }
    Pmf out{std::move(probs), 0};
    out.normalize();
    // drop the all-zero tail
    while (out.probs.size() > 1 && out.probs.back() == 0.0) out.probs.pop_back();
    return out;
}

std::vector<double> crm_old_feature_probs(const BetaLevy& levy,
                                          const FeatureSample& sample) {
    std::vector<double> probs;
    probs.reserve(sample.features.size());
    for (const auto& f : sample.features) {
        probs.push_back((f.count - levy.alpha) / (sample.n + levy.beta));
    }
    return probs;
}

}  // namespace featalloc
