#include "featalloc/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "featalloc/errors.hpp"
#include "featalloc/math_util.hpp"

namespace featalloc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logit(double p) { return std::log(p / (1.0 - p)); }
double expit(double t) { return 1.0 / (1.0 + std::exp(-t)); }

using Params4 = std::array<double, 4>;  // (log a, log b, logit(rho pi a^2), log alpha)

Params4 transform(double a, double b, double rho, double alpha) {
    const double occ = rho * std::numbers::pi * alpha * alpha;
    return {std::log(a), std::log(b), logit(std::clamp(occ, 1e-12, 1.0 - 1e-12)),
            std::log(alpha)};
}

void untransform(const Params4& t, double& a, double& b, double& rho,
                 double& alpha) {
    a = std::exp(t[0]);
    b = std::exp(t[1]);
    alpha = std::exp(t[3]);
    rho = expit(t[2]) / (std::numbers::pi * alpha * alpha);
}

// Minimal Nelder-Mead maximizer on R^4. Vertices may span a lower-dimensional
// affine subspace (e.g. marks held fixed); the affine update rules then never
// leave it.
struct Simplex {
    std::vector<Params4> pts;
    std::vector<double> vals;

    int size() const { return static_cast<int>(pts.size()); }

    void sort_desc() {
        std::vector<int> idx(pts.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
        std::sort(idx.begin(), idx.end(),
                  [&](int i, int j) { return vals[i] > vals[j]; });
        const auto p = pts;
        const auto v = vals;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            pts[i] = p[idx[i]];
            vals[i] = v[idx[i]];
        }
    }

    double diameter() const {
        double d = 0.0;
        for (int i = 1; i < size(); ++i) {
            for (int c = 0; c < 4; ++c) {
                d = std::max(d, std::fabs(pts[i][c] - pts[0][c]));
            }
        }
        return d;
    }
};

Params4 affine(const Params4& a, const Params4& b, double t) {
    Params4 out;
    for (int c = 0; c < 4; ++c) out[c] = a[c] + t * (b[c] - a[c]);
    return out;
}

}  // namespace

FitResult fit_empirical_bayes(const FeatureSample& sample, const Rect& region,
                              int ng, const FitInit& init, int budget) {
    if (sample.k() < 1) {
        throw DataError("fit_empirical_bayes: need at least one observed feature");
    }
    int evals = 0;
    bool any_finite = false;
    auto objective = [&](const Params4& t) {
        ++evals;
        double a, b, rho, alpha;
        untransform(t, a, b, rho, alpha);
        if (!(alpha > 1e-6 && alpha < 10.0)) return kNegInf;
        try {
            DppModel model(GaussianDppKernel(rho, alpha, region),
                           BetaMarkLaw(a, b), ng);
            const double v = dpp_log_marginal(model, sample);
            if (std::isfinite(v)) any_finite = true;
            return v;
        } catch (const std::exception&) {
            return kNegInf;
        }
    };

    const int first_dim = init.fix_marks ? 2 : 0;
    const int m = 4 - first_dim + 1;  // vertices = free dims + 1
    Simplex s;
    s.pts.resize(m);
    s.vals.resize(m);
    s.pts[0] = transform(init.a, init.b, init.rho, init.alpha);
    for (int i = 1; i < m; ++i) {
        s.pts[i] = s.pts[0];
        s.pts[i][first_dim + i - 1] += 0.25;
    }
    for (int i = 0; i < m; ++i) s.vals[i] = objective(s.pts[i]);

    bool converged = false;
    const int last = m - 1;
    while (evals < budget) {
        s.sort_desc();
        if (s.diameter() < 1e-6) {
            converged = true;
            break;
        }
        Params4 centroid = {0, 0, 0, 0};
        for (int i = 0; i < last; ++i) {
            for (int c = 0; c < 4; ++c) centroid[c] += s.pts[i][c] / last;
        }
        const Params4 reflected = affine(centroid, s.pts[last], -1.0);
        const double fr = objective(reflected);
        if (fr > s.vals[0]) {
            const Params4 expanded = affine(centroid, s.pts[last], -2.0);
            const double fe = objective(expanded);
            if (fe > fr) {
                s.pts[last] = expanded;
                s.vals[last] = fe;
            } else {
                s.pts[last] = reflected;
                s.vals[last] = fr;
            }
        } else if (fr > s.vals[last - 1]) {
            s.pts[last] = reflected;
            s.vals[last] = fr;
        } else {
            const Params4 contracted = affine(centroid, s.pts[last], 0.5);
            const double fc = objective(contracted);
            if (fc > s.vals[last]) {
                s.pts[last] = contracted;
                s.vals[last] = fc;
            } else {
                for (int i = 1; i < m; ++i) {
                    s.pts[i] = affine(s.pts[0], s.pts[i], 0.5);
                    s.vals[i] = objective(s.pts[i]);
                }
            }
        }
    }
    s.sort_desc();
    if (!any_finite) {
        throw DataError(
            "fit_empirical_bayes: objective non-finite everywhere (degenerate "
            "data)");
    }
    FitResult res;
    untransform(s.pts[0], res.a, res.b, res.rho, res.alpha);
    res.log_marginal = s.vals[0];
    res.converged = converged;
    res.iterations = evals;
    return res;
}

double alpha_log_posterior(double a, const FeatureSample& sample, double gamma,
                           double beta,
                           const std::function<double(double)>& prior_density) {
    if (!(a > 0.0 && a < 1.0)) return kNegInf;
    if (!(beta > 0.0)) {
        throw std::domain_error("alpha_log_posterior: beta must be positive");
    }
    const double prior = prior_density(a);
    if (!(prior > 0.0)) return kNegInf;
    double phi = 0.0;
    for (int h = 0; h < sample.n; ++h) {
        phi += std::exp(log_beta(1.0 - a, h + beta + a));
    }
    double acc = -gamma * phi + std::log(prior);
    for (const auto& f : sample.features) {
        acc += std::log(gamma) + log_beta(f.count - a, sample.n - f.count + beta + a);
    }
    return acc;
}

AlphaChain alpha_metropolis(const FeatureSample& sample, double gamma,
                            double beta,
                            const std::function<double(double)>& prior_density,
                            int n_iter, double step, Rng& rng) {
    if (n_iter < 1) throw std::domain_error("alpha_metropolis: need n_iter >= 1");
    std::normal_distribution<double> normal(0.0, step);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // chain runs on t = logit(alpha); Jacobian term log[a(1-a)]
    auto log_target = [&](double t) {
        const double a = expit(t);
        const double lp = alpha_log_posterior(a, sample, gamma, beta, prior_density);
        if (!std::isfinite(lp)) return kNegInf;
        return lp + std::log(a) + std::log1p(-a);
    };

    double t = 0.0;  // alpha = 0.5
    double lt = log_target(t);
    const int burn = n_iter / 5;
    AlphaChain chain;
    chain.draws.reserve(n_iter - burn);
    int accepted = 0;
    for (int it = 0; it < n_iter; ++it) {
        const double prop = t + normal(rng);
        const double lp = log_target(prop);
        if (lp > lt || unif(rng) < std::exp(lp - lt)) {
            t = prop;
            lt = lp;
            ++accepted;
        }
        if (it >= burn) chain.draws.push_back(expit(t));
    }
    chain.acceptance_rate = static_cast<double>(accepted) / n_iter;
    return chain;
}

NewFeatureLaw random_alpha_predictive(const AlphaChain& chain,
                                      const BetaLevy& levy_template, int n) {
    if (chain.draws.empty()) {
        throw DataError("random_alpha_predictive: empty chain");
    }
    std::vector<double> mix;
    for (double a : chain.draws) {
        BetaLevy levy(levy_template.gamma, a, levy_template.beta,
                      levy_template.region);
        const Pmf p = le_cam_pmf(new_feature_rate(levy, n));
        if (p.probs.size() > mix.size()) mix.resize(p.probs.size(), 0.0);
        for (std::size_t i = 0; i < p.probs.size(); ++i) mix[i] += p.probs[i];
    }
    for (double& v : mix) v /= static_cast<double>(chain.draws.size());
    NewFeatureLaw law;
    law.count_law = Pmf{std::move(mix), 0};
    law.count_law.normalize();
    law.depends_on = "n,k,m";
    return law;
}

}  // namespace featalloc
