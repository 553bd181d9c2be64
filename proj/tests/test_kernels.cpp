#include "doctest.h"

#include <cmath>
#include <vector>

#include "aeroseg/simd/kernels.hpp"
#include "aeroseg/util/rng.hpp"

// Equivalence suite for the runtime-dispatched kernels: every AVX2 variant
// is checked against the scalar reference. Elementwise kernels must agree
// bit for bit; dot reassociates, so it gets a relative bound.

using namespace aeroseg;

namespace {

// sizes crossing the 8/4-lane and unroll boundaries
const std::vector<std::size_t> kSizes = {0, 1, 2, 3, 5, 7, 8, 9, 15, 16, 17,
                                         31, 32, 33, 63, 64, 65, 127, 128, 129, 257, 1000};

template <typename T>
std::vector<T> random_vec(Rng& rng, std::size_t n, double lo = -2.0, double hi = 2.0) {
    std::vector<T> v(n);
    for (auto& x : v) x = static_cast<T>(rng.uniform(lo, hi));
    return v;
}

bool have_avx2() { return kern::detected_isa() == kern::Isa::Avx2; }

} // namespace

TEST_CASE("dispatch: active isa honours overrides") {
    const kern::Isa initial = kern::active_isa();
    kern::set_active_isa(kern::Isa::Scalar);
    CHECK(kern::active_isa() == kern::Isa::Scalar);
    CHECK(kern::ops<float>().dot == kern::scalar::ops_f32.dot);
    kern::set_active_isa(initial);
}

TEST_CASE("dot: scalar reference on known values") {
    const float x[3] = {1.0f, 2.0f, 3.0f};
    const float y[3] = {4.0f, 5.0f, 6.0f};
    CHECK(kern::scalar::ops_f32.dot(x, y, 3) == doctest::Approx(32.0f));
    CHECK(kern::scalar::ops_f32.dot(x, y, 0) == 0.0f);
}

TEST_CASE("dot: avx2 matches scalar within rounding") {
    if (!have_avx2()) return;
#if defined(AEROSEG_BUILD_AVX2)
    Rng rng(11);
    for (std::size_t n : kSizes) {
        for (int rep = 0; rep < 4; ++rep) {
            auto xf = random_vec<float>(rng, n);
            auto yf = random_vec<float>(rng, n);
            const double sf = kern::scalar::ops_f32.dot(xf.data(), yf.data(), n);
            const double vf = kern::avx2::ops_f32.dot(xf.data(), yf.data(), n);
            const double scale_f = std::max(1.0, std::abs(sf));
            CHECK(std::abs(sf - vf) / scale_f < 1e-5);

            auto xd = random_vec<double>(rng, n);
            auto yd = random_vec<double>(rng, n);
            const double sd = kern::scalar::ops_f64.dot(xd.data(), yd.data(), n);
            const double vd = kern::avx2::ops_f64.dot(xd.data(), yd.data(), n);
            const double scale_d = std::max(1.0, std::abs(sd));
            CHECK(std::abs(sd - vd) / scale_d < 1e-13);
        }
    }
#endif
}

TEST_CASE("axpy/relu/sgd: avx2 bit-exact against scalar") {
    if (!have_avx2()) return;
#if defined(AEROSEG_BUILD_AVX2)
    Rng rng(12);
    for (std::size_t n : kSizes) {
        const auto x = random_vec<float>(rng, n);
        const auto g = random_vec<float>(rng, n);
        const float a = static_cast<float>(rng.uniform(-1.5, 1.5));

        auto y1 = random_vec<float>(rng, n);
        auto y2 = y1;
        kern::scalar::ops_f32.axpy(a, x.data(), y1.data(), n);
        kern::avx2::ops_f32.axpy(a, x.data(), y2.data(), n);
        CHECK(y1 == y2);

        std::vector<float> r1(n), r2(n);
        kern::scalar::ops_f32.relu_fwd(x.data(), r1.data(), n);
        kern::avx2::ops_f32.relu_fwd(x.data(), r2.data(), n);
        CHECK(r1 == r2);

        kern::scalar::ops_f32.relu_bwd(x.data(), g.data(), r1.data(), n);
        kern::avx2::ops_f32.relu_bwd(x.data(), g.data(), r2.data(), n);
        CHECK(r1 == r2);

        auto w1 = random_vec<float>(rng, n);
        auto w2 = w1;
        auto v1 = random_vec<float>(rng, n, -0.1, 0.1);
        auto v2 = v1;
        kern::scalar::ops_f32.sgd_update(w1.data(), v1.data(), g.data(), 1e-4f, 0.9f, 5e-4f, n);
        kern::avx2::ops_f32.sgd_update(w2.data(), v2.data(), g.data(), 1e-4f, 0.9f, 5e-4f, n);
        CHECK(w1 == w2);
        CHECK(v1 == v2);
    }
#endif
}

TEST_CASE("axpy/relu/sgd: double variants bit-exact") {
    if (!have_avx2()) return;
#if defined(AEROSEG_BUILD_AVX2)
    Rng rng(13);
    for (std::size_t n : kSizes) {
        const auto x = random_vec<double>(rng, n);
        const auto g = random_vec<double>(rng, n);

        auto y1 = random_vec<double>(rng, n);
        auto y2 = y1;
        kern::scalar::ops_f64.axpy(0.37, x.data(), y1.data(), n);
        kern::avx2::ops_f64.axpy(0.37, x.data(), y2.data(), n);
        CHECK(y1 == y2);

        std::vector<double> r1(n), r2(n);
        kern::scalar::ops_f64.relu_bwd(x.data(), g.data(), r1.data(), n);
        kern::avx2::ops_f64.relu_bwd(x.data(), g.data(), r2.data(), n);
        CHECK(r1 == r2);

        auto w1 = random_vec<double>(rng, n);
        auto w2 = w1;
        auto v1 = random_vec<double>(rng, n, -0.1, 0.1);
        auto v2 = v1;
        kern::scalar::ops_f64.sgd_update(w1.data(), v1.data(), g.data(), 1e-4, 0.9, 5e-4, n);
        kern::avx2::ops_f64.sgd_update(w2.data(), v2.data(), g.data(), 1e-4, 0.9, 5e-4, n);
        CHECK(w1 == w2);
        CHECK(v1 == v2);
    }
#endif
}

TEST_CASE("relu: negative zero and exact zero stay non-positive") {
    const float x[4] = {-0.0f, 0.0f, -1.0f, 1.0f};
    float y[4];
    kern::ops<float>().relu_fwd(x, y, 4);
    CHECK(y[0] == 0.0f);
    CHECK(y[1] == 0.0f);
    CHECK(y[2] == 0.0f);
    CHECK(y[3] == 1.0f);
}
