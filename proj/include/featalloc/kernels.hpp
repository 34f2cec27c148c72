#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <vector>

#include "featalloc/geometry.hpp"

namespace featalloc {

class Kernel {
  public:
    virtual ~Kernel() = default;
    virtual double eval(const Point& y1, const Point& y2) const = 0;
    virtual const Rect& region() const = 0;

    /// Symmetric Gram matrix K_{ij} = eval(pts[i], pts[j]).
    virtual Eigen::MatrixXd gram(const std::vector<Point>& pts) const;

    /// Diagonal eval(pts[i], pts[i]).
    virtual Eigen::VectorXd diagonal(const std::vector<Point>& pts) const;
};

/// C(x, y) = rho * exp(-||x - y||^2 / alpha^2) on a rectangle, valid for
/// rho < 1 / (pi alpha^2).
class GaussianDppKernel : public Kernel {
  public:
    GaussianDppKernel(double rho, double alpha, Rect region);

    double eval(const Point& y1, const Point& y2) const override;
    const Rect& region() const override { return region_; }
    Eigen::MatrixXd gram(const std::vector<Point>& pts) const override;
    Eigen::VectorXd diagonal(const std::vector<Point>& pts) const override;

    /// C(a_i, b_j) as a rows(a) x cols(b) matrix.
    Eigen::MatrixXd cross(const std::vector<Point>& a,
                          const std::vector<Point>& b) const;

    double rho() const { return rho_; }
    double alpha() const { return alpha_; }

  private:
    double rho_;
    double alpha_;
    Rect region_;
};

/// Reduced Palm kernel K_x*(y1,y2) = C(y1,y2) - c(y1)^T Ctilde^{-1} c(y2)
/// anchored at distinct points x*. With no anchors this is the base kernel.
class PalmKernel : public Kernel {
  public:
    PalmKernel(GaussianDppKernel base, std::vector<Point> anchors);

    double eval(const Point& y1, const Point& y2) const override;
    const Rect& region() const override { return base_.region(); }
    Eigen::MatrixXd gram(const std::vector<Point>& pts) const override;
    Eigen::VectorXd diagonal(const std::vector<Point>& pts) const override;

    const GaussianDppKernel& base() const { return base_; }
    const std::vector<Point>& anchors() const { return anchors_; }

    /// log det of the anchor Gram matrix Ctilde (0 when no anchors).
    double log_det_gram() const;

  private:
    GaussianDppKernel base_;
    std::vector<Point> anchors_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

PalmKernel palm_reduce(const GaussianDppKernel& kernel,
                       const std::vector<Point>& anchors);

/// Nystrom eigendecomposition of a kernel on a cell-centered grid: the
/// eigenvalues of the grid Gram matrix scaled by the cell area, clamped to
/// [0,1] and sorted descending.
struct GridEig {
    Grid grid;
    Eigen::VectorXd eigvals;
    Eigen::MatrixXd eigvecs;  // columns follow eigvals order; empty unless requested
};

GridEig grid_eigendecompose(const Kernel& kernel, const Rect& region, int ng,
                            bool want_vectors = false);

/// Quadrature trace: cell_area * sum_i K(y_i, y_i), clamped at 0.
double palm_trace(const Kernel& kernel, const Rect& region, int ng);

}  // namespace featalloc
