#pragma once

#include <cstddef>

namespace featalloc::simd {

// Data-parallel inner loops used by the kernel and discrete-distribution
// modules. Scalar reference implementations always exist; an AVX2 variant
// is selected at runtime when the CPU supports it. Set FEATALLOC_SIMD=scalar
// to force the reference path.
struct Ops {
    const char* name;

    // out[i] = scale * exp(-((xs[i]-x0)^2 + (ys[i]-y0)^2) * inv_len2)
    void (*gauss_row)(const double* xs, const double* ys, std::size_t n,
                      double x0, double y0, double inv_len2, double scale,
                      double* out);

    // next[m] = prev[m]*(1-lam) + prev[m-1]*lam for m in [0, n], with
    // prev[-1] = prev[n] = 0. prev holds n entries, next holds n+1.
    void (*bernoulli_convolve)(const double* prev, std::size_t n, double lam,
                               double* next);

    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
};

const Ops& scalar_ops();

// Null when the binary was built without AVX2 or the CPU lacks it.
const Ops* avx2_ops();

// Active implementation (dispatched once, thread-safe).
const Ops& ops();

}  // namespace featalloc::simd
