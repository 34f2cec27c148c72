#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "featalloc/kernels.hpp"
#include "featalloc/priors.hpp"

namespace featalloc {

using Rng = std::mt19937_64;

/// Finite marked point configuration: a draw of the latent process.
struct PsiRealization {
    struct Atom {
        Point location;
        double weight;  // in (0, 1]
    };
    std::vector<Atom> atoms;

    /// Expected number of features per observation lost to weight
    /// truncation (zero for exactly finite priors).
    double truncation_bias = 0.0;
};

/// One Bernoulli-process observation: indices into a PsiRealization.
struct Observation {
    std::vector<std::size_t> feature_ids;
};

/// Summary of n observations: distinct observed features with counts.
struct FeatureSample {
    struct Feature {
        Point location;
        int count;  // 1 <= count <= n
    };
    int n = 0;
    std::vector<Feature> features;

    int k() const { return static_cast<int>(features.size()); }
    std::vector<Point> locations() const;
    std::vector<int> counts() const;
};

/// Poisson process draw with weights restricted to [eps, 1]. The discarded
/// mass is reported as truncation_bias (expected lost features per
/// observation).
PsiRealization sample_poisson_psi(const BetaLevy& levy, double eps, Rng& rng);

/// Mixed Poisson: total mass multiplier drawn from the gamma mixing law.
PsiRealization sample_mixed_psi(const BetaLevy& levy, const GammaMixing& mixing,
                                double eps, Rng& rng);

/// Mixed binomial: M ~ count law, then M iid (location, weight) pairs with
/// uniform locations on `region` and Beta(a,b) weights.
PsiRealization sample_mb_psi(const CountLaw& count, const BetaMarkLaw& mark,
                             const Rect& region, Rng& rng);

/// Exact spectral sample of the grid-discretized DPP, with uniform in-cell
/// jitter and independent Beta(a,b) marks.
PsiRealization sample_dpp_psi(const GaussianDppKernel& kernel,
                              const BetaMarkLaw& mark, int ng, Rng& rng);

/// Same, reusing a precomputed eigendecomposition (must carry eigenvectors).
PsiRealization sample_dpp_psi(const GridEig& eig, const BetaMarkLaw& mark,
                              Rng& rng);

/// n iid Bernoulli-process observations of psi.
std::vector<Observation> sample_observations(const PsiRealization& psi, int n,
                                             Rng& rng);

FeatureSample summarize(const PsiRealization& psi,
                        const std::vector<Observation>& observations);

/// Total unnormalized Levy mass gamma * int_eps^1 s^{-1-a}(1-s)^{b+a-1} ds.
double levy_mass(const BetaLevy& levy, double eps);

}  // namespace featalloc
