#pragma once

#include <variant>

#include "featalloc/geometry.hpp"

namespace featalloc {

/// Three-parameter beta Levy density
///   gamma * s^{-1-alpha} (1-s)^{beta+alpha-1} ds
/// on (0,1], with a uniform spatial base density on `region`.
/// alpha = 0, beta = 1 gives the Indian buffet process prior.
struct BetaLevy {
    double gamma;
    double alpha;  // in [0, 1)
    double beta;   // beta + alpha > 0
    Rect region;

    BetaLevy(double gamma_, double alpha_, double beta_, Rect region_);

    /// Levy density at weight s (spatial part integrated out).
    double density(double s) const;
};

struct BetaMarkLaw {
    double a;
    double b;
    BetaMarkLaw(double a_, double b_);
};

/// Gamma law for the random total-mass multiplier of a mixed Poisson prior.
struct GammaMixing {
    double shape;
    double rate;
    GammaMixing(double shape_, double rate_);
    double mean() const { return shape / rate; }
};

struct PoissonCount {
    double lambda;  // > 0
};
struct NegBinCount {
    double r;  // > 0
    double p;  // in (0,1)
};
using CountLaw = std::variant<PoissonCount, NegBinCount>;

/// phi_n = gamma * sum_{i<n} B(1-alpha, beta+alpha+i).
double varphi_n(const BetaLevy& levy, int n);

/// lambda_n = gamma * B(1-alpha, beta+alpha+n): the mean number of new
/// features revealed by observation n+1.
double new_feature_rate(const BetaLevy& levy, int n);

/// gamma * B(m-alpha, n-m+beta+alpha): integral of s^m (1-s)^{n-m} against
/// the Levy density. Requires 1 <= m <= n.
double feature_factor(const BetaLevy& levy, int m, int n);

/// g(n; a, b) = B(a, b+n) / B(a, b) = E[(1-S)^n] for S ~ Beta(a, b).
double kappa_g(const BetaMarkLaw& mark, int n);

}  // namespace featalloc
