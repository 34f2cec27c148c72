#pragma once

#include "featalloc/infer_crm.hpp"
#include "featalloc/kernels.hpp"
#include "featalloc/poibin.hpp"
#include "featalloc/priors.hpp"
#include "featalloc/simulate.hpp"

namespace featalloc {

enum class DppMode { exact, lecam };

/// Independently marked Gaussian DPP prior with Beta(a, b) marks,
/// discretized on an ng x ng grid for spectral computations.
struct DppModel {
    GaussianDppKernel kernel;
    BetaMarkLaw mark;
    int ng;

    DppModel(GaussianDppKernel kernel_, BetaMarkLaw mark_, int ng_);
};

/// Posterior law of the total feature count M' + k (support offset = k).
struct CountPosterior {
    Pmf pmf;
    DppMode mode_used;
};

/// Unseen-feature intensity per unit area on the evaluation grid;
/// zero at the observed anchors.
struct IntensityMap {
    Grid grid;
    std::vector<double> values;
    DppMode mode_used;
};

double dpp_log_marginal(const DppModel& model, const FeatureSample& sample);

WeightPosterior dpp_weight_posterior(const DppModel& model,
                                     const FeatureSample& sample);

CountPosterior dpp_count_posterior(const DppModel& model,
                                   const FeatureSample& sample, DppMode mode);

/// h(y) = K_x*(y,y) * g * E[g^{N_y}] / E[g^{N_x*}]. In lecam mode the
/// probability generating functionals are replaced by exp{-(1-g) trace}
/// with a rank-one trace update per grid point; in exact mode they are
/// evaluated through the determinant identity
/// E[g^N] = det(I - (1-g) Delta K).
IntensityMap unseen_intensity_map(const DppModel& model,
                                  const FeatureSample& sample, DppMode mode);

double expected_total_count(const CountPosterior& cp);

}  // namespace featalloc
