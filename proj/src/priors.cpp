#include "featalloc/priors.hpp"

#include <cmath>
#include <stdexcept>

#include "featalloc/math_util.hpp"

namespace featalloc {

BetaLevy::BetaLevy(double gamma_, double alpha_, double beta_, Rect region_)
    : gamma(gamma_), alpha(alpha_), beta(beta_), region(region_) {
    if (!(gamma > 0.0)) throw std::domain_error("BetaLevy: gamma must be positive");
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::domain_error("BetaLevy: alpha must lie in [0,1)");
    }
    if (!(beta + alpha > 0.0)) {
        throw std::domain_error("BetaLevy: beta + alpha must be positive");
    }
}

double BetaLevy::density(double s) const {
    if (!(s > 0.0 && s <= 1.0)) return 0.0;
    return gamma * std::pow(s, -1.0 - alpha) * std::pow(1.0 - s, beta + alpha - 1.0);
}

BetaMarkLaw::BetaMarkLaw(double a_, double b_) : a(a_), b(b_) {
    if (!(a > 0.0 && b > 0.0)) {
        throw std::domain_error("BetaMarkLaw: parameters must be positive");
    }
}

GammaMixing::GammaMixing(double shape_, double rate_) : shape(shape_), rate(rate_) {
    if (!(shape > 0.0 && rate > 0.0)) {
        throw std::domain_error("GammaMixing: parameters must be positive");
    }
}

double varphi_n(const BetaLevy& levy, int n) {
    if (n < 0) throw std::domain_error("varphi_n: n must be nonnegative");
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += std::exp(log_beta(1.0 - levy.alpha, levy.beta + levy.alpha + i));
    }
    return levy.gamma * acc;
}

double new_feature_rate(const BetaLevy& levy, int n) {
    if (n < 0) throw std::domain_error("new_feature_rate: n must be nonnegative");
    return levy.gamma * std::exp(log_beta(1.0 - levy.alpha, levy.beta + levy.alpha + n));
}

double feature_factor(const BetaLevy& levy, int m, int n) {
    if (m < 1 || m > n) throw std::domain_error("feature_factor: need 1 <= m <= n");
    return levy.gamma *
           std::exp(log_beta(m - levy.alpha, n - m + levy.beta + levy.alpha));
}

double kappa_g(const BetaMarkLaw& mark, int n) {
    if (n < 0) throw std::domain_error("kappa_g: n must be nonnegative");
    return std::exp(log_beta(mark.a, mark.b + n) - log_beta(mark.a, mark.b));
}

}  // namespace featalloc
