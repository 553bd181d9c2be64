#include "aeroseg/simd/kernels.hpp"

#include <immintrin.h>

// AVX2+FMA kernels. Compiled with -mavx2 -mfma; only reachable after the
// runtime CPU check in dispatch.cpp.
//
// dot uses FMA into four accumulators, so its rounding differs from the
// scalar reference; the equivalence suite bounds the relative error.
// axpy, relu_*, and sgd_update are elementwise and use mul/add only
// (no FMA), so they are bit-exact against the scalar reference.

namespace aeroseg::kern::avx2 {

namespace {

float dot_f32(const float* x, const float* y, std::size_t n) {
    __m256 acc0 = _mm256_setzero_ps();
    __m256 acc1 = _mm256_setzero_ps();
    __m256 acc2 = _mm256_setzero_ps();
    __m256 acc3 = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i), acc0);
        acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(x + i + 8), _mm256_loadu_ps(y + i + 8), acc1);
        acc2 = _mm256_fmadd_ps(_mm256_loadu_ps(x + i + 16), _mm256_loadu_ps(y + i + 16), acc2);
        acc3 = _mm256_fmadd_ps(_mm256_loadu_ps(x + i + 24), _mm256_loadu_ps(y + i + 24), acc3);
    }
    for (; i + 8 <= n; i += 8)
        acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i), acc0);
    __m256 acc = _mm256_add_ps(_mm256_add_ps(acc0, acc1), _mm256_add_ps(acc2, acc3));
    __m128 lo = _mm256_castps256_ps128(acc);
    __m128 hi = _mm256_extractf128_ps(acc, 1);
    __m128 s = _mm_add_ps(lo, hi);
    s = _mm_add_ps(s, _mm_movehl_ps(s, s));
    s = _mm_add_ss(s, _mm_shuffle_ps(s, s, 1));
    float total = _mm_cvtss_f32(s);
    for (; i < n; ++i) total += x[i] * y[i];
    return total;
}

double dot_f64(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
        acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), acc2);
        acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), acc3);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    __m256d acc = _mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3));
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);
    s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
    double total = _mm_cvtsd_f64(s);
    for (; i < n; ++i) total += x[i] * y[i];
    return total;
}

void axpy_f32(float a, const float* x, float* y, std::size_t n) {
    const __m256 va = _mm256_set1_ps(a);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 prod = _mm256_mul_ps(va, _mm256_loadu_ps(x + i));
        _mm256_storeu_ps(y + i, _mm256_add_ps(_mm256_loadu_ps(y + i), prod));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void axpy_f64(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void relu_fwd_f32(const float* x, float* y, std::size_t n) {
    const __m256 zero = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(y + i, _mm256_max_ps(zero, _mm256_loadu_ps(x + i)));
    for (; i < n; ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void relu_fwd_f64(const double* x, double* y, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_max_pd(zero, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_bwd_f32(const float* x, const float* gy, float* gx, std::size_t n) {
    const __m256 zero = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 mask = _mm256_cmp_ps(_mm256_loadu_ps(x + i), zero, _CMP_GT_OQ);
        _mm256_storeu_ps(gx + i, _mm256_and_ps(mask, _mm256_loadu_ps(gy + i)));
    }
    for (; i < n; ++i) gx[i] = x[i] > 0.0f ? gy[i] : 0.0f;
}

void relu_bwd_f64(const double* x, const double* gy, double* gx, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(x + i), zero, _CMP_GT_OQ);
        _mm256_storeu_pd(gx + i, _mm256_and_pd(mask, _mm256_loadu_pd(gy + i)));
    }
    for (; i < n; ++i) gx[i] = x[i] > 0.0 ? gy[i] : 0.0;
}

void sgd_update_f32(float* w, float* v, const float* g, float lr, float mu, float wd, std::size_t n) {
    const __m256 vlr = _mm256_set1_ps(lr);
    const __m256 vmu = _mm256_set1_ps(mu);
    const __m256 vwd = _mm256_set1_ps(wd);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 wi = _mm256_loadu_ps(w + i);
        __m256 step = _mm256_add_ps(_mm256_loadu_ps(g + i), _mm256_mul_ps(vwd, wi));
        __m256 vi = _mm256_sub_ps(_mm256_mul_ps(vmu, _mm256_loadu_ps(v + i)), _mm256_mul_ps(vlr, step));
        _mm256_storeu_ps(v + i, vi);
        _mm256_storeu_ps(w + i, _mm256_add_ps(wi, vi));
    }
    for (; i < n; ++i) {
        const float step = g[i] + wd * w[i];
        v[i] = mu * v[i] - lr * step;
        w[i] += v[i];
    }
}

void sgd_update_f64(double* w, double* v, const double* g, double lr, double mu, double wd, std::size_t n) {
    const __m256d vlr = _mm256_set1_pd(lr);
    const __m256d vmu = _mm256_set1_pd(mu);
    const __m256d vwd = _mm256_set1_pd(wd);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d wi = _mm256_loadu_pd(w + i);
        __m256d step = _mm256_add_pd(_mm256_loadu_pd(g + i), _mm256_mul_pd(vwd, wi));
        __m256d vi = _mm256_sub_pd(_mm256_mul_pd(vmu, _mm256_loadu_pd(v + i)), _mm256_mul_pd(vlr, step));
        _mm256_storeu_pd(v + i, vi);
        _mm256_storeu_pd(w + i, _mm256_add_pd(wi, vi));
    }
    for (; i < n; ++i) {
        const double step = g[i] + wd * w[i];
        v[i] = mu * v[i] - lr * step;
        w[i] += v[i];
    }
}

} // namespace

const Ops<float> ops_f32 = {dot_f32, axpy_f32, relu_fwd_f32, relu_bwd_f32, sgd_update_f32};
const Ops<double> ops_f64 = {dot_f64, axpy_f64, relu_fwd_f64, relu_bwd_f64, sgd_update_f64};

} // namespace aeroseg::kern::avx2
