#include "featalloc/infer_dpp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "featalloc/errors.hpp"
#include "featalloc/math_util.hpp"

namespace featalloc {

DppModel::DppModel(GaussianDppKernel kernel_, BetaMarkLaw mark_, int ng_)
    : kernel(std::move(kernel_)), mark(mark_), ng(ng_) {
    if (ng < 10) throw std::domain_error("DppModel: need ng >= 10");
}

namespace {

Eigen::LLT<Eigen::MatrixXd> pgf_cholesky(const Eigen::MatrixXd& kp,
                                         double cell_area, double g) {
    // A = I - (1-g) * Delta * Kp, positive definite for g in (0,1].
    Eigen::MatrixXd a = (-(1.0 - g) * cell_area) * kp;
    a.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        throw NumericError("dpp inference: PGF matrix not positive definite");
    }
    return llt;
}

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
    double acc = 0.0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i) acc += std::log(l(i, i));
    return 2.0 * acc;
}

}  // namespace

double dpp_log_marginal(const DppModel& model, const FeatureSample& sample) {
    const double g = kappa_g(model.mark, sample.n);
    const PalmKernel pk = palm_reduce(model.kernel, sample.locations());
    double acc = pk.log_det_gram();
    for (const auto& f : sample.features) {
        acc += log_beta(f.count + model.mark.a, sample.n - f.count + model.mark.b) -
               log_beta(model.mark.a, model.mark.b);
    }
    if (g < 1.0) {
        const Grid grid = grid_discretize(model.kernel.region(), model.ng);
        const Eigen::MatrixXd kp = pk.gram(grid.points);
        acc += log_det_from_llt(pgf_cholesky(kp, grid.cell_area, g));
    }
    return acc;
}

WeightPosterior dpp_weight_posterior(const DppModel& model,
                                     const FeatureSample& sample) {
    WeightPosterior wp;
    wp.per_feature.reserve(sample.features.size());
    for (const auto& f : sample.features) {
        wp.per_feature.push_back(
            {f.count + model.mark.a, sample.n - f.count + model.mark.b});
    }
    return wp;
}

CountPosterior dpp_count_posterior(const DppModel& model,
                                   const FeatureSample& sample, DppMode mode) {
    const double g = kappa_g(model.mark, sample.n);
    const PalmKernel pk = palm_reduce(model.kernel, sample.locations());
    CountPosterior cp;
    cp.mode_used = mode;
    if (mode == DppMode::lecam) {
        const double trace = palm_trace(pk, model.kernel.region(), model.ng);
        cp.pmf = le_cam_pmf(g * trace);
    } else {
        const GridEig eig =
            grid_eigendecompose(pk, model.kernel.region(), model.ng);
        SuccessProbs sp;
        for (Eigen::Index i = 0; i < eig.eigvals.size(); ++i) {
            if (eig.eigvals(i) > 1e-14) sp.lambdas.push_back(eig.eigvals(i));
        }
        cp.pmf = tilt_pmf(poisson_binomial_pmf(sp), g);
    }
    cp.pmf.support_offset = sample.k();
    return cp;
}

IntensityMap unseen_intensity_map(const DppModel& model,
                                  const FeatureSample& sample, DppMode mode) {
    const double g = kappa_g(model.mark, sample.n);
    const PalmKernel pk = palm_reduce(model.kernel, sample.locations());
    IntensityMap map;
    map.mode_used = mode;
    map.grid = grid_discretize(model.kernel.region(), model.ng);
    const double delta = map.grid.cell_area;
    const Eigen::MatrixXd kp = pk.gram(map.grid.points);
    const Eigen::VectorXd diag = kp.diagonal();
    const Eigen::Index n = kp.rows();
    const double floor = 1e-12 * model.kernel.rho();
    map.values.assign(static_cast<std::size_t>(n), 0.0);

    if (mode == DppMode::lecam) {
        for (Eigen::Index y = 0; y < n; ++y) {
            if (diag(y) < floor) continue;
            // rank-one Palm step: trace drop at y, in cell-area units
            const double s_y = delta * kp.col(y).squaredNorm() / diag(y);
            map.values[static_cast<std::size_t>(y)] =
                diag(y) * g * std::exp((1.0 - g) * s_y);
        }
    } else {
        const auto llt = pgf_cholesky(kp, delta, g);
        const Eigen::MatrixXd x = llt.solve(kp);
        for (Eigen::Index y = 0; y < n; ++y) {
            if (diag(y) < floor) continue;
            const double q = kp.col(y).dot(x.col(y));
            map.values[static_cast<std::size_t>(y)] =
                diag(y) * g * (1.0 + (1.0 - g) * delta * q / diag(y));
        }
    }
    return map;
}

double expected_total_count(const CountPosterior& cp) { return cp.pmf.mean(); }

}  // namespace featalloc
