#include "featalloc/simd.hpp"

#if defined(FEATALLOC_BUILD_AVX2) && defined(__AVX2__)

#include <immintrin.h>

#include <cmath>

namespace featalloc::simd {
namespace {

// Cephes-style double precision exp on 4 lanes, ~2 ulp.
inline __m256d exp4(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
    const __m256d hi = _mm256_set1_pd(708.0);
    const __m256d lo = _mm256_set1_pd(-708.0);

    __m256d clamped = _mm256_min_pd(_mm256_max_pd(x, lo), hi);
    __m256d n = _mm256_round_pd(_mm256_mul_pd(clamped, log2e),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, c1, clamped);
    r = _mm256_fnmadd_pd(n, c2, r);
    __m256d r2 = _mm256_mul_pd(r, r);

    __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(3.02994407707441961300e-2));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, r);

    __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
    q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.52448340349684104192e-3));
    q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.27265548208155028766e-1));
    q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.00000000000000000005e0));

    __m256d ratio = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    __m256d res = _mm256_fmadd_pd(_mm256_set1_pd(2.0), ratio, _mm256_set1_pd(1.0));

    // res *= 2^n via exponent-field injection.
    __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    __m256i biased = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
    __m256d pow2 = _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
    return _mm256_mul_pd(res, pow2);
}

void gauss_row_avx2(const double* xs, const double* ys, std::size_t n,
                    double x0, double y0, double inv_len2, double scale,
                    double* out) {
    const __m256d vx0 = _mm256_set1_pd(x0);
    const __m256d vy0 = _mm256_set1_pd(y0);
    const __m256d vinv = _mm256_set1_pd(-inv_len2);
    const __m256d vscale = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vx0);
        __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vy0);
        __m256d d2 = _mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dx, dx));
        __m256d e = exp4(_mm256_mul_pd(d2, vinv));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(vscale, e));
    }
    for (; i < n; ++i) {
        const double dx = xs[i] - x0;
        const double dy = ys[i] - y0;
        out[i] = scale * std::exp(-(dx * dx + dy * dy) * inv_len2);
    }
}

void bernoulli_convolve_avx2(const double* prev, std::size_t n, double lam,
                             double* next) {
    const double qd = 1.0 - lam;
    next[0] = prev[0] * qd;
    const __m256d vq = _mm256_set1_pd(qd);
    const __m256d vl = _mm256_set1_pd(lam);
    std::size_t m = 1;
    for (; m + 4 <= n; m += 4) {
        __m256d cur = _mm256_loadu_pd(prev + m);
        __m256d shifted = _mm256_loadu_pd(prev + m - 1);
        _mm256_storeu_pd(next + m,
                         _mm256_fmadd_pd(cur, vq, _mm256_mul_pd(shifted, vl)));
    }
    for (; m < n; ++m) next[m] = prev[m] * qd + prev[m - 1] * lam;
    next[n] = prev[n - 1] * lam;
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return hsum(acc) + tail;
}

double sum_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i];
    return hsum(acc) + tail;
}

}  // namespace

const Ops* avx2_ops() {
    static const Ops ops = {"avx2", gauss_row_avx2, bernoulli_convolve_avx2,
                            dot_avx2, sum_avx2};
    if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) {
        return nullptr;
    }
    return &ops;
}

}  // namespace featalloc::simd

#else

namespace featalloc::simd {
const Ops* avx2_ops() { return nullptr; }
}  // namespace featalloc::simd

#endif
