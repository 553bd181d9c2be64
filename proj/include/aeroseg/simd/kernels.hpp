#pragma once

#include <cstddef>

// Inner-loop kernels for the network engine. Every kernel has a scalar
// reference implementation and, on x86-64, an AVX2+FMA variant selected at
// runtime. The scalar path is the semantic reference: the AVX2 variants are
// equivalence-tested against it (bit-exact for the elementwise kernels,
// bounded relative error for the reduction in dot).
//
// Selection order: AEROSEG_SIMD env var (scalar|avx2|auto), then CPUID.

namespace aeroseg::kern {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa);

// Highest ISA this build+CPU supports.
Isa detected_isa();

// ISA currently routing through ops<T>(). Resolved once from AEROSEG_SIMD
// and the CPU; can be overridden (used by the equivalence tests).
Isa active_isa();
void set_active_isa(Isa isa);

template <typename T>
struct Ops {
    // sum_i x[i]*y[i]
    T (*dot)(const T* x, const T* y, std::size_t n);
    // y[i] += a*x[i]
    void (*axpy)(T a, const T* x, T* y, std::size_t n);
    // y[i] = max(0, x[i])
    void (*relu_fwd)(const T* x, T* y, std::size_t n);
    // gx[i] = x[i] > 0 ? gy[i] : 0
    void (*relu_bwd)(const T* x, const T* gy, T* gx, std::size_t n);
    // v = mu*v - lr*(g + wd*w); w += v
    void (*sgd_update)(T* w, T* v, const T* g, T lr, T mu, T wd, std::size_t n);
};

template <typename T>
const Ops<T>& ops_for(Isa isa);

// Table for the active ISA.
template <typename T>
inline const Ops<T>& ops() {
    return ops_for<T>(active_isa());
}

namespace scalar {
extern const Ops<float> ops_f32;
extern const Ops<double> ops_f64;
}

#if defined(AEROSEG_BUILD_AVX2)
namespace avx2 {
extern const Ops<float> ops_f32;
extern const Ops<double> ops_f64;
}
#endif

} // namespace aeroseg::kern
