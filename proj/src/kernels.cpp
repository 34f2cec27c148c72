#include "featalloc/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "featalloc/errors.hpp"
#include "featalloc/simd.hpp"

namespace featalloc {

Rect::Rect(Point lower_, double len_x_, double len_y_)
    : lower(lower_), len_x(len_x_), len_y(len_y_) {
    if (!(len_x > 0.0 && len_y > 0.0)) {
        throw std::domain_error("Rect: side lengths must be positive");
    }
}

bool Rect::contains(const Point& p) const {
    return p.x >= lower.x && p.x <= lower.x + len_x && p.y >= lower.y &&
           p.y <= lower.y + len_y;
}

Grid grid_discretize(const Rect& region, int ng) {
    if (ng < 2) throw std::domain_error("grid_discretize: need ng >= 2");
    Grid g;
    g.ng = ng;
    const double hx = region.len_x / ng;
    const double hy = region.len_y / ng;
    g.cell_area = hx * hy;
    g.points.reserve(static_cast<std::size_t>(ng) * ng);
    for (int i = 0; i < ng; ++i) {
        for (int j = 0; j < ng; ++j) {
            g.points.push_back({region.lower.x + (i + 0.5) * hx,
                                region.lower.y + (j + 0.5) * hy});
        }
    }
    return g;
}

namespace {

void require_inside(const Kernel& k, const Point& p, const char* who) {
    if (!k.region().contains(p)) {
        std::ostringstream os;
        os << who << ": point (" << p.x << ", " << p.y << ") outside region";
        throw std::domain_error(os.str());
    }
}

// Split point list into coordinate arrays for the SIMD row kernel.
struct Coords {
    std::vector<double> xs, ys;
    explicit Coords(const std::vector<Point>& pts) {
        xs.reserve(pts.size());
        ys.reserve(pts.size());
        for (const Point& p : pts) {
            xs.push_back(p.x);
            ys.push_back(p.y);
        }
    }
};

}  // namespace

Eigen::MatrixXd Kernel::gram(const std::vector<Point>& pts) const {
    const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            m(i, j) = m(j, i) = eval(pts[i], pts[j]);
        }
    }
    return m;
}

Eigen::VectorXd Kernel::diagonal(const std::vector<Point>& pts) const {
    Eigen::VectorXd d(static_cast<Eigen::Index>(pts.size()));
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = eval(pts[i], pts[i]);
    return d;
}

GaussianDppKernel::GaussianDppKernel(double rho, double alpha, Rect region)
    : rho_(rho), alpha_(alpha), region_(region) {
    if (!(rho > 0.0)) throw std::domain_error("GaussianDppKernel: rho must be positive");
    if (!(alpha > 0.0)) {
        throw std::domain_error("GaussianDppKernel: alpha must be positive");
    }
    if (!(rho * std::numbers::pi * alpha * alpha < 1.0)) {
        throw std::domain_error(
            "GaussianDppKernel: existence requires rho < 1/(pi alpha^2)");
    }
}

double GaussianDppKernel::eval(const Point& y1, const Point& y2) const {
    require_inside(*this, y1, "GaussianDppKernel::eval");
    require_inside(*this, y2, "GaussianDppKernel::eval");
    const double dx = y1.x - y2.x;
    const double dy = y1.y - y2.y;
    return rho_ * std::exp(-(dx * dx + dy * dy) / (alpha_ * alpha_));
}

Eigen::MatrixXd GaussianDppKernel::gram(const std::vector<Point>& pts) const {
    for (const Point& p : pts) require_inside(*this, p, "GaussianDppKernel::gram");
    const Coords c(pts);
    const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
    const double inv = 1.0 / (alpha_ * alpha_);
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        simd::ops().gauss_row(c.xs.data(), c.ys.data(), pts.size(), c.xs[i],
                              c.ys[i], inv, rho_, m.col(i).data());
    }
    return m;
}

Eigen::VectorXd GaussianDppKernel::diagonal(const std::vector<Point>& pts) const {
    return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(pts.size()), rho_);
}

Eigen::MatrixXd GaussianDppKernel::cross(const std::vector<Point>& a,
                                         const std::vector<Point>& b) const {
    const Coords cb(b);
    const double inv = 1.0 / (alpha_ * alpha_);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(a.size()),
                      static_cast<Eigen::Index>(b.size()));
    std::vector<double> buf(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        simd::ops().gauss_row(cb.xs.data(), cb.ys.data(), b.size(), a[i].x, a[i].y,
                              inv, rho_, buf.data());
        m.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(
            buf.data(), static_cast<Eigen::Index>(b.size()));
    }
    return m;
}

PalmKernel::PalmKernel(GaussianDppKernel base, std::vector<Point> anchors)
    : base_(std::move(base)), anchors_(std::move(anchors)) {
    if (anchors_.empty()) return;
    for (const Point& p : anchors_) require_inside(base_, p, "PalmKernel");
    Eigen::MatrixXd ctilde = base_.gram(anchors_);
    llt_.compute(ctilde);
    bool bad = llt_.info() != Eigen::Success;
    double min_pivot = std::numeric_limits<double>::infinity();
    if (!bad) {
        for (Eigen::Index i = 0; i < ctilde.rows(); ++i) {
            const double l = llt_.matrixLLT()(i, i);
            min_pivot = std::min(min_pivot, l * l);
        }
        bad = !(min_pivot > 1e-10 * base_.rho());
    }
    if (bad) {
        // name the offending near-duplicate pair
        std::size_t bi = 0, bj = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < anchors_.size(); ++i) {
            for (std::size_t j = i + 1; j < anchors_.size(); ++j) {
                const double dx = anchors_[i].x - anchors_[j].x;
                const double dy = anchors_[i].y - anchors_[j].y;
                const double d2 = dx * dx + dy * dy;
                if (d2 < best) {
                    best = d2;
                    bi = i;
                    bj = j;
                }
            }
        }
        std::ostringstream os;
        os << "palm_reduce: anchor Gram matrix is ill-conditioned; closest pair "
           << "is anchors " << bi << " and " << bj << " at distance "
           << std::sqrt(best);
        throw NumericError(os.str());
    }
}

double PalmKernel::eval(const Point& y1, const Point& y2) const {
    const double c = base_.eval(y1, y2);
    if (anchors_.empty()) return c;
    const Eigen::MatrixXd c1 = base_.cross(anchors_, {y1});
    const Eigen::MatrixXd c2 = base_.cross(anchors_, {y2});
    return c - (c1.col(0).transpose() * llt_.solve(c2.col(0)))(0);
}

Eigen::MatrixXd PalmKernel::gram(const std::vector<Point>& pts) const {
    Eigen::MatrixXd c = base_.gram(pts);
    if (anchors_.empty()) return c;
    const Eigen::MatrixXd b = base_.cross(anchors_, pts);  // k x n
    c.noalias() -= b.transpose() * llt_.solve(b);
    return c;
}

Eigen::VectorXd PalmKernel::diagonal(const std::vector<Point>& pts) const {
    Eigen::VectorXd d = base_.diagonal(pts);
    if (anchors_.empty()) return d;
    const Eigen::MatrixXd b = base_.cross(anchors_, pts);
    const Eigen::MatrixXd half =
        llt_.matrixL().solve(b);  // L^{-1} b, columnwise
    d -= half.colwise().squaredNorm().transpose();
    return d;
}

double PalmKernel::log_det_gram() const {
    if (anchors_.empty()) return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(anchors_.size()); ++i) {
        acc += std::log(llt_.matrixLLT()(i, i));
    }
    return 2.0 * acc;
}

PalmKernel palm_reduce(const GaussianDppKernel& kernel,
                       const std::vector<Point>& anchors) {
    return PalmKernel(kernel, anchors);
}

GridEig grid_eigendecompose(const Kernel& kernel, const Rect& region, int ng,
                            bool want_vectors) {
    GridEig out;
    out.grid = grid_discretize(region, ng);
    Eigen::MatrixXd m = kernel.gram(out.grid.points);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.compute(m, want_vectors ? Eigen::ComputeEigenvectors
                                   : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("grid_eigendecompose: eigensolver failed to converge");
    }
    const Eigen::Index n = m.rows();
    out.eigvals.resize(n);
    if (want_vectors) out.eigvecs.resize(n, n);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        // Eigen returns ascending order; reverse to descending.
        const Eigen::Index src = n - 1 - i;
        double lam = solver.eigenvalues()(src) * out.grid.cell_area;
        if (lam > 1.0) worst = std::max(worst, lam - 1.0);
        if (lam < 0.0) worst = std::max(worst, -lam);
        out.eigvals(i) = std::min(1.0, std::max(0.0, lam));
        if (want_vectors) out.eigvecs.col(i) = solver.eigenvectors().col(src);
    }
    if (worst > 1e-6) {
        std::cerr << "warning: grid eigenvalues clamped to [0,1] by " << worst
                  << "; kernel is close to the existence boundary\n";
    }
    return out;
}

double palm_trace(const Kernel& kernel, const Rect& region, int ng) {
    const Grid g = grid_discretize(region, ng);
    const double t = kernel.diagonal(g.points).sum() * g.cell_area;
    return std::max(0.0, t);
}

}  // namespace featalloc
