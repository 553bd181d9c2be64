#include "aeroseg/simd/kernels.hpp"

// Reference kernels. Plain loops, one accumulator, no reassociation: these
// define the semantics the AVX2 variants are tested against.

namespace aeroseg::kern::scalar {

namespace {

template <typename T>
T dot_impl(const T* x, const T* y, std::size_t n) {
    T acc = T(0);
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

template <typename T>
void axpy_impl(T a, const T* x, T* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

template <typename T>
void relu_fwd_impl(const T* x, T* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > T(0) ? x[i] : T(0);
}

template <typename T>
void relu_bwd_impl(const T* x, const T* gy, T* gx, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) gx[i] = x[i] > T(0) ? gy[i] : T(0);
}

template <typename T>
void sgd_update_impl(T* w, T* v, const T* g, T lr, T mu, T wd, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const T step = g[i] + wd * w[i];
        v[i] = mu * v[i] - lr * step;
        w[i] += v[i];
    }
}

} // namespace

const Ops<float> ops_f32 = {
    dot_impl<float>, axpy_impl<float>, relu_fwd_impl<float>, relu_bwd_impl<float>,
    sgd_update_impl<float>,
};

const Ops<double> ops_f64 = {
    dot_impl<double>, axpy_impl<double>, relu_fwd_impl<double>, relu_bwd_impl<double>,
    sgd_update_impl<double>,
};

} // namespace aeroseg::kern::scalar
