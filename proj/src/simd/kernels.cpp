#include "alphaflow/simd/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(_M_X64)
#define ALPHAFLOW_X86 1
#include <immintrin.h>
#else
#define ALPHAFLOW_X86 0
#endif

namespace alphaflow::simd {

namespace {

// ---------------------------------------------------------------- scalar

double sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double weighted_dot_scalar(const double* w, const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * y[i];
    return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void blend_toward_scalar(const double* target, double factor, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = target[i] + (x[i] - target[i]) * factor;
}

double max_abs_diff_scalar(const double* x, const double* y, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i] - y[i]));
    return m;
}

double tensor4x4_scalar(const double* v, const double* wr, const double* wc) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double* row = v + 4 * i;
        s += wr[i] * (row[0] * wc[0] + row[1] * wc[1] + row[2] * wc[2] + row[3] * wc[3]);
    }
    return s;
}

constexpr Kernels kScalar = {
    sum_scalar,         dot_scalar,   weighted_dot_scalar, axpy_scalar,
    scale_scalar,       blend_toward_scalar, max_abs_diff_scalar, tensor4x4_scalar,
    "scalar",
};

// ---------------------------------------------------------------- AVX2

#if ALPHAFLOW_X86

__attribute__((target("avx2,fma"))) inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

__attribute__((target("avx2,fma"))) double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

__attribute__((target("avx2,fma"))) double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

__attribute__((target("avx2,fma"))) double weighted_dot_avx2(const double* w, const double* x,
                                                             const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
        acc = _mm256_fmadd_pd(wx, _mm256_loadu_pd(y + i), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * x[i] * y[i];
    return s;
}

__attribute__((target("avx2,fma"))) void axpy_avx2(double a, const double* x, double* y,
                                                   std::size_t n) {
    __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2,fma"))) void scale_avx2(double a, double* x, std::size_t n) {
    __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

__attribute__((target("avx2,fma"))) void blend_toward_avx2(const double* target, double factor,
                                                           double* x, std::size_t n) {
    __m256d vf = _mm256_set1_pd(factor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_loadu_pd(target + i);
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), t);
        _mm256_storeu_pd(x + i, _mm256_fmadd_pd(d, vf, t));
    }
    for (; i < n; ++i) x[i] = target[i] + (x[i] - target[i]) * factor;
}

__attribute__((target("avx2,fma"))) double max_abs_diff_avx2(const double* x, const double* y,
                                                             std::size_t n) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256d vm = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        vm = _mm256_max_pd(vm, _mm256_andnot_pd(sign_mask, d));
    }
    double lanes[4];
    _mm256_storeu_pd(lanes, vm);
    double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i) m = std::max(m, std::fabs(x[i] - y[i]));
    return m;
}

__attribute__((target("avx2,fma"))) double tensor4x4_avx2(const double* v, const double* wr,
                                                          const double* wc) {
    __m256d acc = _mm256_mul_pd(_mm256_set1_pd(wr[0]), _mm256_loadu_pd(v));
    acc = _mm256_fmadd_pd(_mm256_set1_pd(wr[1]), _mm256_loadu_pd(v + 4), acc);
    acc = _mm256_fmadd_pd(_mm256_set1_pd(wr[2]), _mm256_loadu_pd(v + 8), acc);
    acc = _mm256_fmadd_pd(_mm256_set1_pd(wr[3]), _mm256_loadu_pd(v + 12), acc);
    return hsum(_mm256_mul_pd(acc, _mm256_loadu_pd(wc)));
}

constexpr Kernels kAvx2 = {
    sum_avx2,   dot_avx2,   weighted_dot_avx2, axpy_avx2,
    scale_avx2, blend_toward_avx2, max_abs_diff_avx2, tensor4x4_avx2,
    "avx2",
};

#endif  // ALPHAFLOW_X86

const Kernels& pick() {
#if ALPHAFLOW_X86
    const char* force = std::getenv("ALPHAFLOW_SIMD");
    if (force != nullptr) {
        if (std::strcmp(force, "scalar") == 0) return kScalar;
        if (std::strcmp(force, "avx2") == 0) return kAvx2;
    }
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return kAvx2;
#endif
    return kScalar;
}

}  // namespace

const Kernels& active() {
    static const Kernels& k = pick();
    return k;
}

const Kernels& scalar_kernels() { return kScalar; }

bool avx2_supported() {
#if ALPHAFLOW_X86
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

double weighted_abs_pow_sum(const double* w, const double* x, double p, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::pow(std::fabs(x[i]), p);
    return s;
}

}  // namespace alphaflow::simd
