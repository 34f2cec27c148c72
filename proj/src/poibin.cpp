#include "featalloc/poibin.hpp"

#include <algorithm>
#include <cmath>

#include "featalloc/errors.hpp"
#include "featalloc/simd.hpp"

namespace featalloc {

double Pmf::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        m += probs[i] * (static_cast<double>(i) + support_offset);
    }
    return m;
}

double Pmf::variance() const {
    const double mu = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double x = static_cast<double>(i) + support_offset - mu;
        v += probs[i] * x * x;
    }
    return v;
}

void Pmf::normalize() {
    const double total = simd::ops().sum(probs.data(), probs.size());
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw NumericError("Pmf::normalize: total mass is zero or non-finite");
    }
    for (double& p : probs) p /= total;
}

Pmf poisson_binomial_pmf(const SuccessProbs& sp) {
    for (double lam : sp.lambdas) {
        if (!(lam >= 0.0 && lam <= 1.0)) {
            throw std::domain_error("poisson_binomial_pmf: lambda outside [0,1]");
        }
    }
    std::vector<double> cur = {1.0};
    std::vector<double> next;
    for (double lam : sp.lambdas) {
        next.resize(cur.size() + 1);
        simd::ops().bernoulli_convolve(cur.data(), cur.size(), lam, next.data());
        cur.swap(next);
    }
    return Pmf{std::move(cur), 0};
}

Pmf tilt_pmf(const Pmf& pmf, double g) {
    if (!(g > 0.0)) throw std::domain_error("tilt_pmf: g must be positive");
    Pmf out = pmf;
    double factor = 1.0;
    for (double& p : out.probs) {
        p *= factor;
        factor *= g;
    }
    const double total = simd::ops().sum(out.probs.data(), out.probs.size());
    if (!(total > 0.0)) {
        throw NumericError("tilt_pmf: tilted mass is zero (degenerate tilt)");
    }
    for (double& p : out.probs) p /= total;
    return out;
}

Pmf le_cam_pmf(double trace_sum, double tail_eps) {
    if (!(trace_sum >= 0.0)) {
        throw std::domain_error("le_cam_pmf: trace_sum must be nonnegative");
    }
    if (trace_sum == 0.0) return Pmf{{1.0}, 0};
    std::vector<double> probs;
    double p = std::exp(-trace_sum);
    double cum = p;
    probs.push_back(p);
    // extend until the remaining tail mass is below tail_eps
    for (int m = 1; cum < 1.0 - tail_eps; ++m) {
        p *= trace_sum / m;
        probs.push_back(p);
        cum += p;
        if (m > 100000000) throw NumericError("le_cam_pmf: truncation runaway");
    }
    Pmf out{std::move(probs), 0};
    out.normalize();
    return out;
}

Pmf negbin_pmf(double r, double p, double tail_eps) {
    if (!(r > 0.0)) throw std::domain_error("negbin_pmf: r must be positive");
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::domain_error("negbin_pmf: p must lie in (0,1]");
    }
    std::vector<double> probs;
    double q = std::pow(p, r);
    double cum = q;
    probs.push_back(q);
    for (int m = 0; cum < 1.0 - tail_eps; ++m) {
        q *= (r + m) / (m + 1.0) * (1.0 - p);
        probs.push_back(q);
        cum += q;
        if (m > 100000000) throw NumericError("negbin_pmf: truncation runaway");
    }
    Pmf out{std::move(probs), 0};
    out.normalize();
    return out;
}

double total_variation(const Pmf& a, const Pmf& b) {
    const int lo = std::min(a.support_offset, b.support_offset);
    const int hi = std::max(a.support_offset + static_cast<int>(a.probs.size()),
                            b.support_offset + static_cast<int>(b.probs.size()));
    double acc = 0.0;
    for (int v = lo; v < hi; ++v) {
        const int ia = v - a.support_offset;
        const int ib = v - b.support_offset;
        const double pa =
            (ia >= 0 && ia < static_cast<int>(a.probs.size())) ? a.probs[ia] : 0.0;
        const double pb =
            (ib >= 0 && ib < static_cast<int>(b.probs.size())) ? b.probs[ib] : 0.0;
        acc += std::fabs(pa - pb);
    }
    return 0.5 * acc;
}

}  // namespace featalloc
