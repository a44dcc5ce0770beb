#pragma once

#include <cstddef>

namespace alphaflow::simd {

// Inner-loop kernels shared by the field algebra, quadrature reductions and
// the semi-Lagrangian interpolation. Scalar reference implementations always
// exist; on x86-64 an AVX2+FMA variant of each kernel is selected once at
// startup when the CPU supports it. The ALPHAFLOW_SIMD environment variable
// overrides the choice ("scalar", "avx2", "auto").
//
// The scalar and vector variants of a kernel must agree to reduction
// round-off; tests/test_simd.cpp enforces this.

struct Kernels {
    // sum_i x[i]
    double (*sum)(const double* x, std::size_t n);
    // sum_i x[i] y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // sum_i w[i] x[i] y[i]
    double (*weighted_dot)(const double* w, const double* x, const double* y, std::size_t n);
    // y[i] += a x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // x[i] *= a
    void (*scale)(double a, double* x, std::size_t n);
    // x[i] = target[i] + (x[i] - target[i]) * factor
    void (*blend_toward)(const double* target, double factor, double* x, std::size_t n);
    // max_i |x[i] - y[i]|
    double (*max_abs_diff)(const double* x, const double* y, std::size_t n);
    // sum_{i,j<4} wr[i] wc[j] v[4i+j]   (tensor-product cubic stencil)
    double (*tensor4x4)(const double* v, const double* wr, const double* wc);

    const char* name;
};

// Kernel set picked at startup (scalar unless AVX2+FMA is present).
const Kernels& active();

// Scalar reference set, always available.
const Kernels& scalar_kernels();

bool avx2_supported();

// sum_i w[i] |x[i]|^p  (scalar only; libm pow has no vector form here)
double weighted_abs_pow_sum(const double* w, const double* x, double p, std::size_t n);

}  // namespace alphaflow::simd
