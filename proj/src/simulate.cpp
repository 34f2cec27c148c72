#include "featalloc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "featalloc/errors.hpp"
#include "featalloc/math_util.hpp"

namespace featalloc {

std::vector<Point> FeatureSample::locations() const {
    std::vector<Point> out;
    out.reserve(features.size());
    for (const auto& f : features) out.push_back(f.location);
    return out;
}

std::vector<int> FeatureSample::counts() const {
    std::vector<int> out;
    out.reserve(features.size());
    for (const auto& f : features) out.push_back(f.count);
    return out;
}

namespace {

// Inverse-CDF sampler for the weight density s^{-1-a}(1-s)^{c-1} restricted
// to [eps, 1]. Tabulated in two transformed coordinates that absorb the
// endpoint singularities: u = log s on [eps, 1/2] and w = (1-s)^c on
// (1/2, 1].
class WeightSampler {
  public:
    WeightSampler(double alpha, double c, double eps) : alpha_(alpha), c_(c) {
        const double s_split = std::min(0.5, std::max(eps, 0.25));
        if (eps < s_split) {
            append_log_segment(std::log(eps), std::log(s_split), 256);
        }
        append_tail_segment(std::pow(1.0 - s_split, c_), 256);
        double acc = 0.0;
        for (auto& seg : segments_) {
            acc += seg.mass;
            seg.cum = acc;
        }
        total_ = acc;
        if (!(total_ > 0.0)) {
            throw NumericError("WeightSampler: zero restricted mass");
        }
    }

    double total_mass() const { return total_; }

    double sample(Rng& rng) const {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double target = unif(rng) * total_;
        std::size_t lo = 0, hi = segments_.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (segments_[mid].cum < target) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        const Segment& seg = segments_[lo];
        // density approximately linear in the transformed coordinate
        const double rem = target - (seg.cum - seg.mass);
        const double frac = invert_linear(seg.f0, seg.f1, rem / seg.mass);
        const double t = seg.t0 + frac * (seg.t1 - seg.t0);
        return seg.log_coord ? std::exp(t) : 1.0 - std::pow(t, 1.0 / c_);
    }

  private:
    struct Segment {
        double t0, t1;    // transformed coordinate endpoints
        double f0, f1;    // transformed density at the endpoints
        double mass, cum;
        bool log_coord;
    };

    // density of s in u = log s: s^{-a}(1-s)^{c-1}
    double fu(double u) const {
        const double s = std::exp(u);
        return std::exp(-alpha_ * u) * std::pow(1.0 - s, c_ - 1.0);
    }
    // density of s in w = (1-s)^c: (1/c) s^{-1-a}
    double fw(double w) const {
        const double s = 1.0 - std::pow(w, 1.0 / c_);
        if (s <= 0.0) return 0.0;
        return std::pow(s, -1.0 - alpha_) / c_;
    }

    void append_log_segment(double u0, double u1, int cells) {
        for (int i = 0; i < cells; ++i) {
            Segment seg;
            seg.t0 = u0 + (u1 - u0) * i / cells;
            seg.t1 = u0 + (u1 - u0) * (i + 1) / cells;
            seg.f0 = fu(seg.t0);
            seg.f1 = fu(seg.t1);
            seg.mass = integrate([this](double u) { return fu(u); }, seg.t0,
                                 seg.t1, 1);
            seg.log_coord = true;
            segments_.push_back(seg);
        }
    }

    void append_tail_segment(double w_max, int cells) {
        // w runs downward in s; segment order does not matter
        for (int i = 0; i < cells; ++i) {
            Segment seg;
            seg.t0 = w_max * i / cells;
            seg.t1 = w_max * (i + 1) / cells;
            seg.f0 = fw(std::max(seg.t0, 1e-300));
            seg.f1 = fw(seg.t1);
            seg.mass = integrate([this](double w) { return fw(w); }, seg.t0,
                                 seg.t1, 1);
            seg.log_coord = false;
            segments_.push_back(seg);
        }
    }

    // Inverse CDF of a linear density interpolating (0, f0) -> (1, f1).
    static double invert_linear(double f0, double f1, double q) {
        q = std::clamp(q, 0.0, 1.0);
        const double denom = f0 + f1;
        if (denom <= 0.0) return q;
        const double a = (f1 - f0) / denom;
        if (std::fabs(a) < 1e-12) return q;
        // solve a x^2 + (1-a) x - q = 0 on [0,1]
        const double b = 1.0 - a;
        const double disc = b * b + 4.0 * a * q;
        return (-b + std::sqrt(std::max(0.0, disc))) / (2.0 * a);
    }

    double alpha_, c_;
    double total_ = 0.0;
    std::vector<Segment> segments_;
};

Point uniform_point(const Rect& region, Rng& rng) {
    std::uniform_real_distribution<double> ux(region.lower.x,
                                              region.lower.x + region.len_x);
    std::uniform_real_distribution<double> uy(region.lower.y,
                                              region.lower.y + region.len_y);
    return {ux(rng), uy(rng)};
}

double beta_draw(double a, double b, Rng& rng) {
    std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    return x / (x + y);
}

double truncation_bias(const BetaLevy& levy, double eps) {
    // gamma * int_0^eps s^{-alpha} (1-s)^{c-1} ds with v = s^{1-alpha}
    const double c = levy.beta + levy.alpha;
    const double e = 1.0 - levy.alpha;
    const double v_max = std::pow(eps, e);
    const double integral = integrate(
        [&](double v) {
            const double s = std::pow(v, 1.0 / e);
            return std::pow(1.0 - s, c - 1.0) / e;
        },
        0.0, v_max, 16);
    return levy.gamma * integral;
}

}  // namespace

double levy_mass(const BetaLevy& levy, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw std::domain_error(
            "levy_mass: truncation eps must lie in (0,1] (the untruncated mass "
            "is infinite)");
    }
    if (eps == 1.0) return 0.0;
    WeightSampler ws(levy.alpha, levy.beta + levy.alpha, eps);
    return levy.gamma * ws.total_mass();
}

PsiRealization sample_poisson_psi(const BetaLevy& levy, double eps, Rng& rng) {
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw std::domain_error(
            "sample_poisson_psi: eps must lie in (0,1]; eps = 0 gives an "
            "infinite-mass restriction");
    }
    PsiRealization psi;
    psi.truncation_bias = truncation_bias(levy, eps);
    if (eps == 1.0) return psi;
    WeightSampler ws(levy.alpha, levy.beta + levy.alpha, eps);
    std::poisson_distribution<int> count(levy.gamma * ws.total_mass());
    const int m = count(rng);
    psi.atoms.reserve(m);
    for (int j = 0; j < m; ++j) {
        psi.atoms.push_back({uniform_point(levy.region, rng), ws.sample(rng)});
    }
    return psi;
}

PsiRealization sample_mixed_psi(const BetaLevy& levy, const GammaMixing& mixing,
                                double eps, Rng& rng) {
    std::gamma_distribution<double> gd(mixing.shape, 1.0 / mixing.rate);
    const double g = gd(rng);
    if (g <= 0.0) return PsiRealization{};
    BetaLevy scaled(levy.gamma * g, levy.alpha, levy.beta, levy.region);
    return sample_poisson_psi(scaled, eps, rng);
}

PsiRealization sample_mb_psi(const CountLaw& count, const BetaMarkLaw& mark,
                             const Rect& region, Rng& rng) {
    int m = 0;
    if (const auto* poi = std::get_if<PoissonCount>(&count)) {
        if (poi->lambda > 0.0) {
            std::poisson_distribution<int> d(poi->lambda);
            m = d(rng);
        }
    } else {
        const auto& nb = std::get<NegBinCount>(count);
        std::gamma_distribution<double> gd(nb.r, (1.0 - nb.p) / nb.p);
        std::poisson_distribution<int> d(std::max(0.0, gd(rng)));
        m = d(rng);
    }
    PsiRealization psi;
    psi.atoms.reserve(m);
    for (int j = 0; j < m; ++j) {
        psi.atoms.push_back(
            {uniform_point(region, rng), beta_draw(mark.a, mark.b, rng)});
    }
    return psi;
}

namespace {

// Spectral DPP sampler on the discretized kernel: Bernoulli eigencomponent
// selection followed by sequential projection sampling of grid cells.
std::vector<int> sample_dpp_cells(const GridEig& eig, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Eigen::Index> selected;
    for (Eigen::Index i = 0; i < eig.eigvals.size(); ++i) {
        if (unif(rng) < eig.eigvals(i)) selected.push_back(i);
    }
    std::vector<int> cells;
    if (selected.empty()) return cells;
    const Eigen::Index n = eig.eigvecs.rows();
    Eigen::MatrixXd v(n, static_cast<Eigen::Index>(selected.size()));
    for (std::size_t j = 0; j < selected.size(); ++j) {
        v.col(static_cast<Eigen::Index>(j)) = eig.eigvecs.col(selected[j]);
    }
    while (v.cols() > 0) {
        const Eigen::Index m = v.cols();
        Eigen::VectorXd row_sq = v.rowwise().squaredNorm();
        const double total = row_sq.sum();
        double target = unif(rng) * total;
        Eigen::Index pick = n - 1;
        for (Eigen::Index i = 0; i < n; ++i) {
            target -= row_sq(i);
            if (target <= 0.0) {
                pick = i;
                break;
            }
        }
        cells.push_back(static_cast<int>(pick));
        if (m == 1) break;
        // project the span onto functions vanishing at the picked cell,
        // keeping an orthonormal basis of dimension m-1
        Eigen::VectorXd c = v.row(pick).transpose();
        const double cn = c.norm();
        if (cn <= 0.0) break;  // numerically impossible pick
        c /= cn;
        const Eigen::VectorXd u = v * c;
        v.noalias() -= u * c.transpose();
        // Householder rotating c onto the last coordinate axis
        Eigen::VectorXd d = c;
        d(m - 1) += (c(m - 1) >= 0.0 ? 1.0 : -1.0);
        const double dn2 = d.squaredNorm();
        if (dn2 > 0.0) {
            const Eigen::VectorXd vd = v * d;
            v.noalias() -= (2.0 / dn2) * vd * d.transpose();
        }
        v.conservativeResize(Eigen::NoChange, m - 1);
    }
    return cells;
}

}  // namespace

PsiRealization sample_dpp_psi(const GridEig& eig, const BetaMarkLaw& mark,
                              Rng& rng) {
    if (eig.eigvecs.size() == 0) {
        throw std::invalid_argument(
            "sample_dpp_psi: eigendecomposition lacks eigenvectors");
    }
    const std::vector<int> cells = sample_dpp_cells(eig, rng);
    const int ng = eig.grid.ng;
    PsiRealization psi;
    psi.atoms.reserve(cells.size());
    std::uniform_real_distribution<double> jit(-0.5, 0.5);
    // recover cell side lengths from the grid layout
    const double side_x =
        ng > 1 ? (eig.grid.points[static_cast<std::size_t>(ng)].x -
                  eig.grid.points[0].x)
               : 0.0;
    const double side_y = ng > 1 ? (eig.grid.points[1].y - eig.grid.points[0].y)
                                 : 0.0;
    for (int cell : cells) {
        Point p = eig.grid.points[static_cast<std::size_t>(cell)];
        p.x += jit(rng) * side_x;
        p.y += jit(rng) * side_y;
        psi.atoms.push_back({p, beta_draw(mark.a, mark.b, rng)});
    }
    return psi;
}

PsiRealization sample_dpp_psi(const GaussianDppKernel& kernel,
                              const BetaMarkLaw& mark, int ng, Rng& rng) {
    const GridEig eig = grid_eigendecompose(kernel, kernel.region(), ng, true);
    return sample_dpp_psi(eig, mark, rng);
}

std::vector<Observation> sample_observations(const PsiRealization& psi, int n,
                                             Rng& rng) {
    if (n < 1) throw std::domain_error("sample_observations: need n >= 1");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Observation> obs(n);
    for (int i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < psi.atoms.size(); ++j) {
            if (unif(rng) < psi.atoms[j].weight) obs[i].feature_ids.push_back(j);
        }
    }
    return obs;
}

FeatureSample summarize(const PsiRealization& psi,
                        const std::vector<Observation>& observations) {
    std::map<std::size_t, int> counts;
    for (const Observation& o : observations) {
        for (std::size_t id : o.feature_ids) counts[id] += 1;
    }
    FeatureSample fs;
    fs.n = static_cast<int>(observations.size());
    fs.features.reserve(counts.size());
    for (const auto& [id, c] : counts) {
        fs.features.push_back({psi.atoms[id].location, c});
    }
    return fs;
}

}  // namespace featalloc
