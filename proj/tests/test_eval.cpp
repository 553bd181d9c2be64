#include "doctest.h"

#include <cmath>

#include "aeroseg/eval/metrics.hpp"
#include "aeroseg/util/rng.hpp"

using namespace aeroseg;
using namespace aeroseg::eval;

namespace {

// All-pairs oracle, straight from the definition: a pixel matches when some
// reference positive lies within Euclidean distance rho.
double allpairs_fraction(const Mask& pred, const Mask& ref, int rho) {
    std::size_t total = 0, matched = 0;
    for (int y = 0; y < pred.height; ++y) {
        for (int x = 0; x < pred.width; ++x) {
            if (!pred.at(y, x)) continue;
            ++total;
            bool hit = false;
            for (int gy = 0; gy < ref.height && !hit; ++gy)
                for (int gx = 0; gx < ref.width; ++gx)
                    if (ref.at(gy, gx) &&
                        (y - gy) * (y - gy) + (x - gx) * (x - gx) <= rho * rho) {
                        hit = true;
                        break;
                    }
            matched += hit;
        }
    }
    return total == 0 ? 1.0 : static_cast<double>(matched) / total;
}

Mask random_mask(Rng& rng, int h, int w, double density) {
    Mask m(h, w);
    for (auto& v : m.pixels) v = rng.uniform() < density ? 1 : 0;
    return m;
}

FloatMap map_from(const std::vector<float>& vals, int h, int w) {
    FloatMap m(h, w);
    m.pixels = vals;
    return m;
}

} // namespace

TEST_CASE("relaxed: identical masks score (1,1) at any rho") {
    Rng rng(1);
    for (int rho : {0, 1, 3}) {
        const Mask m = random_mask(rng, 12, 12, 0.3);
        const auto s = relaxed_scores(m, m, RelaxedParams{rho});
        CHECK(s.correctness == 1.0);
        CHECK(s.completeness == 1.0);
    }
}

TEST_CASE("relaxed: disk membership at distance 3 vs sqrt(10)") {
    Mask gt(9, 9);
    gt.at(4, 1) = 1;
    Mask pred(9, 9);
    pred.at(4, 4) = 1; // offset (0,3): distance 3 exactly
    auto s = relaxed_scores(pred, gt, RelaxedParams{3});
    CHECK(s.correctness == 1.0);

    Mask pred2(9, 9);
    pred2.at(5, 4) = 1; // offset (1,3): distance sqrt(10) > 3
    s = relaxed_scores(pred2, gt, RelaxedParams{3});
    CHECK(s.correctness == 0.0);
}

TEST_CASE("relaxed: empty-side conventions") {
    Mask empty(6, 6);
    Mask some(6, 6);
    some.at(2, 2) = 1;
    auto s = relaxed_scores(empty, some, RelaxedParams{1});
    CHECK(s.correctness == 1.0);  // no predicted positives
    CHECK(s.completeness == 0.0);
    s = relaxed_scores(some, empty, RelaxedParams{1});
    CHECK(s.correctness == 0.0);
    CHECK(s.completeness == 1.0); // no ground-truth positives
}

TEST_CASE("relaxed: matches the all-pairs oracle on random 16x16 masks") {
    Rng rng(2);
    for (int rep = 0; rep < 50; ++rep) {
        const Mask pred = random_mask(rng, 16, 16, 0.2);
        const Mask gt = random_mask(rng, 16, 16, 0.2);
        for (int rho : {0, 1, 3}) {
            const auto s = relaxed_scores(pred, gt, RelaxedParams{rho});
            CHECK(s.correctness == allpairs_fraction(pred, gt, rho));
            CHECK(s.completeness == allpairs_fraction(gt, pred, rho));
        }
    }
}

TEST_CASE("relaxed: exhaustive equivalence on all 3x3 mask pairs at rho=1") {
    // 2^9 x 2^9 pairs against the all-pairs oracle
    auto fill = [](Mask& m, unsigned bits) {
        for (int i = 0; i < 9; ++i) m.pixels[static_cast<std::size_t>(i)] = (bits >> i) & 1u;
    };
    Mask a(3, 3), b(3, 3);
    for (unsigned i = 0; i < 512; ++i) {
        fill(a, i);
        for (unsigned j = 0; j < 512; ++j) {
            fill(b, j);
            const auto s = relaxed_scores(a, b, RelaxedParams{1});
            REQUIRE(s.correctness == allpairs_fraction(a, b, 1));
            REQUIRE(s.completeness == allpairs_fraction(b, a, 1));
        }
    }
}

TEST_CASE("relaxed: rho=0 equals plain confusion-matrix precision/recall") {
    Rng rng(3);
    for (int rep = 0; rep < 100; ++rep) {
        const Mask pred = random_mask(rng, 10, 10, 0.4);
        const Mask gt = random_mask(rng, 10, 10, 0.4);
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < pred.pixels.size(); ++i) {
            tp += pred.pixels[i] && gt.pixels[i];
            fp += pred.pixels[i] && !gt.pixels[i];
            fn += !pred.pixels[i] && gt.pixels[i];
        }
        const auto s = relaxed_scores(pred, gt, RelaxedParams{0});
        const double prec = tp + fp == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
        const double rec = tp + fn == 0 ? 1.0 : static_cast<double>(tp) / (tp + fn);
        CHECK(s.correctness == doctest::Approx(prec).epsilon(1e-12));
        CHECK(s.completeness == doctest::Approx(rec).epsilon(1e-12));
    }
}

TEST_CASE("relaxed: growing rho never decreases either score") {
    Rng rng(4);
    for (int rep = 0; rep < 20; ++rep) {
        const Mask pred = random_mask(rng, 14, 14, 0.25);
        const Mask gt = random_mask(rng, 14, 14, 0.25);
        double last_c = -1, last_p = -1;
        for (int rho : {0, 1, 2, 3, 4}) {
            const auto s = relaxed_scores(pred, gt, RelaxedParams{rho});
            CHECK(s.correctness >= last_c);
            CHECK(s.completeness >= last_p);
            last_c = s.correctness;
            last_p = s.completeness;
        }
    }
}

TEST_CASE("relaxed: correctness(a,b) == completeness(b,a)") {
    Rng rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        const Mask a = random_mask(rng, 11, 13, 0.3);
        const Mask b = random_mask(rng, 11, 13, 0.3);
        for (int rho : {0, 2}) {
            const auto sab = relaxed_scores(a, b, RelaxedParams{rho});
            const auto sba = relaxed_scores(b, a, RelaxedParams{rho});
            CHECK(sab.correctness == sba.completeness);
            CHECK(sab.completeness == sba.correctness);
        }
    }
}

TEST_CASE("relaxed: shape mismatch is an error") {
    Mask a(3, 3), b(3, 4);
    CHECK_THROWS(relaxed_scores(a, b, RelaxedParams{1}));
}

TEST_CASE("sweep: constant map flips from all-positive to all-negative") {
    FloatMap prob(4, 4);
    for (auto& v : prob.pixels) v = 0.5f;
    Mask gt(4, 4);
    gt.at(0, 0) = 1;
    const auto rows = sweep(prob, gt, {0.4, 0.6}, RelaxedParams{0});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].completeness == 1.0);             // all positive catches the gt pixel
    CHECK(rows[0].correctness == doctest::Approx(1.0 / 16));
    CHECK(rows[1].correctness == 1.0);              // empty prediction
    CHECK(rows[1].completeness == 0.0);
    CHECK(rows[1].f_measure == 0.0);
}

TEST_CASE("sweep: completeness never increases with the threshold") {
    Rng rng(6);
    FloatMap prob(12, 12);
    for (auto& v : prob.pixels) v = static_cast<float>(rng.uniform());
    const Mask gt = random_mask(rng, 12, 12, 0.3);
    const auto rows = sweep(prob, gt, threshold_grid(0.05), RelaxedParams{1});
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].completeness <= rows[i - 1].completeness + 1e-15);
}

TEST_CASE("sweep: best-F row matches an independent exhaustive recompute") {
    Rng rng(7);
    FloatMap prob(10, 10);
    for (auto& v : prob.pixels) v = static_cast<float>(rng.uniform());
    const Mask gt = random_mask(rng, 10, 10, 0.35);
    const auto grid = threshold_grid(0.1);
    const auto rows = sweep(prob, gt, grid, RelaxedParams{1});
    double best_f = -1;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].f_measure > best_f) {
            best_f = rows[i].f_measure;
            best_i = i;
        }
    // recompute that row from scratch
    Mask pred(10, 10);
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x) pred.at(y, x) = prob.at(y, x) >= grid[best_i] ? 1 : 0;
    const double c = allpairs_fraction(pred, gt, 1);
    const double p = allpairs_fraction(gt, pred, 1);
    CHECK(rows[best_i].f_measure == doctest::Approx(2 * c * p / (c + p)).epsilon(1e-12));
    CHECK(rows[best_i].threshold == grid[best_i]);
}

TEST_CASE("sweep: thresholds must ascend") {
    FloatMap prob(4, 4);
    Mask gt(4, 4);
    CHECK_THROWS(sweep(prob, gt, {0.6, 0.4}, RelaxedParams{0}));
}

TEST_CASE("threshold_grid: 0.01 step gives the 100-value experiment grid") {
    const auto grid = threshold_grid(0.01);
    REQUIRE(grid.size() == 100);
    CHECK(grid.front() == doctest::Approx(0.01));
    CHECK(grid.back() == doctest::Approx(1.0));
    CHECK(threshold_grid(0.05).size() == 20);
}

TEST_CASE("mean_f: single image, averaging, permutation invariance") {
    const FloatMap perfect = map_from({1, 1, 0, 0}, 2, 2);
    Mask gt(2, 2);
    gt.pixels = {1, 1, 0, 0};
    const FloatMap wrong = map_from({0, 0, 1, 1}, 2, 2);

    std::vector<std::pair<const FloatMap*, const Mask*>> one = {{&perfect, &gt}};
    CHECK(mean_f(one, 0.5, RelaxedParams{0}) == 1.0);

    std::vector<std::pair<const FloatMap*, const Mask*>> two = {{&perfect, &gt}, {&wrong, &gt}};
    CHECK(mean_f(two, 0.5, RelaxedParams{0}) == doctest::Approx(0.5));

    std::vector<std::pair<const FloatMap*, const Mask*>> swapped = {{&wrong, &gt}, {&perfect, &gt}};
    CHECK(std::abs(mean_f(two, 0.5, RelaxedParams{0}) - mean_f(swapped, 0.5, RelaxedParams{0})) <=
          1e-12);

    std::vector<std::pair<const FloatMap*, const Mask*>> empty;
    CHECK_THROWS(mean_f(empty, 0.5, RelaxedParams{0}));
}

TEST_CASE("csv: header and 6-decimal rows") {
    const std::vector<ScoreRow> rows = {{0.25, 1.0, 0.5, 2.0 / 3.0}};
    const std::string csv = scores_csv(rows);
    CHECK(csv == "threshold,correctness,completeness,f_measure\n0.250000,1.000000,0.500000,0.666667\n");
}

TEST_CASE("boundary: interior pixels drop out") {
    Mask solid(5, 5);
    for (int y = 1; y <= 3; ++y)
        for (int x = 1; x <= 3; ++x) solid.at(y, x) = 1;
    const Mask b = boundary_pixels(solid);
    CHECK(b.count() == 8); // 3x3 square minus its center
    CHECK(b.at(2, 2) == 0);
    CHECK(boundary_f_measure(solid, solid) == 1.0);
}
