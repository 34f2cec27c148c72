#include <cmath>

#include "featalloc/simd.hpp"

namespace featalloc::simd {
namespace {

void gauss_row_scalar(const double* xs, const double* ys, std::size_t n,
                      double x0, double y0, double inv_len2, double scale,
                      double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - x0;
        const double dy = ys[i] - y0;
        out[i] = scale * std::exp(-(dx * dx + dy * dy) * inv_len2);
    }
}

void bernoulli_convolve_scalar(const double* prev, std::size_t n, double lam,
                               double* next) {
    const double q = 1.0 - lam;
    next[0] = prev[0] * q;
    for (std::size_t m = 1; m < n; ++m) {
        next[m] = prev[m] * q + prev[m - 1] * lam;
    }
    next[n] = prev[n - 1] * lam;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {"scalar", gauss_row_scalar, bernoulli_convolve_scalar,
                            dot_scalar, sum_scalar};
    return ops;
}

}  // namespace featalloc::simd
