#include "aeroseg/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace aeroseg::kern {

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "?";
}

Isa detected_isa() {
#if defined(AEROSEG_BUILD_AVX2) && (defined(__x86_64__) || defined(__i386__))
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::Avx2;
#endif
    return Isa::Scalar;
}

namespace {

Isa resolve_initial() {
    const Isa best = detected_isa();
    if (const char* env = std::getenv("AEROSEG_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (best != Isa::Avx2)
                throw std::runtime_error("AEROSEG_SIMD=avx2 requested but AVX2+FMA is unavailable");
            return Isa::Avx2;
        }
        // anything else (incl. "auto") falls through to detection
    }
    return best;
}

std::atomic<Isa>& active_slot() {
    static std::atomic<Isa> isa{resolve_initial()};
    return isa;
}

} // namespace

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2)
        throw std::runtime_error("cannot activate avx2 kernels: unsupported on this CPU/build");
    active_slot().store(isa, std::memory_order_relaxed);
}

template <>
const Ops<float>& ops_for<float>(Isa isa) {
#if defined(AEROSEG_BUILD_AVX2)
    if (isa == Isa::Avx2) return avx2::ops_f32;
#endif
    (void)isa;
    return scalar::ops_f32;
}

template <>
const Ops<double>& ops_for<double>(Isa isa) {
#if defined(AEROSEG_BUILD_AVX2)
    if (isa == Isa::Avx2) return avx2::ops_f64;
#endif
    (void)isa;
    return scalar::ops_f64;
}

} // namespace aeroseg::kern
