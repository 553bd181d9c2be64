#include "aeroseg/data/patches.hpp"

#include <stdexcept>

namespace aeroseg::data {

Tensor<float> extract_image_window(const ImageF& image, int y, int x, int w) {
    const int y0 = y - w / 2, x0 = x - w / 2;
    if (y0 < 0 || x0 < 0 || y0 + w > image.height || x0 + w > image.width)
        throw std::out_of_range("extract_image_window: window leaves the image");
    Tensor<float> out({3, static_cast<std::size_t>(w), static_cast<std::size_t>(w)});
    float* dst = out.data();
    for (int c = 0; c < 3; ++c)
        for (int yy = 0; yy < w; ++yy)
            for (int xx = 0; xx < w; ++xx) *dst++ = image.at(c, y0 + yy, x0 + xx);
    return out;
}

Tensor<float> extract_label_window(const Mask& mask, int y, int x, int w) {
    const int y0 = y - w / 2, x0 = x - w / 2;
    if (y0 < 0 || x0 < 0 || y0 + w > mask.height || x0 + w > mask.width)
        throw std::out_of_range("extract_label_window: window leaves the mask");
    Tensor<float> out({static_cast<std::size_t>(w) * w});
    float* dst = out.data();
    for (int yy = 0; yy < w; ++yy)
        for (int xx = 0; xx < w; ++xx) *dst++ = static_cast<float>(mask.at(y0 + yy, x0 + xx));
    return out;
}

PatchTriple extract_triple(const Scene& scene, int y, int x) {
    PatchTriple t;
    t.local = extract_image_window(scene.image, y, x, kLocalWidth);
    t.global = extract_image_window(scene.image, y, x, kGlobalWidth);
    t.label = extract_label_window(scene.mask, y, x, kLabelWidth);
    t.center.y = y;
    t.center.x = x;
    for (std::size_t i = 0; i < t.label.size(); ++i)
        if (t.label[i] > 0.0f) {
            t.center.positive = true;
            break;
        }
    return t;
}

bool center_fits(const Scene& scene, int y, int x) {
    const int half = kGlobalWidth / 2;
    return y - half >= 0 && x - half >= 0 && y + half <= scene.image.height &&
           x + half <= scene.image.width;
}

namespace {

bool label_positive(const Scene& scene, int y, int x) {
    const int y0 = y - kLabelWidth / 2, x0 = x - kLabelWidth / 2;
    for (int yy = 0; yy < kLabelWidth; ++yy)
        for (int xx = 0; xx < kLabelWidth; ++xx)
            if (scene.mask.at(y0 + yy, x0 + xx)) return true;
    return false;
}

} // namespace

std::vector<PatchCenter> sample_centers(const Scene& scene, int n, double positive_fraction, Rng& rng) {
    if (n < 0 || positive_fraction < 0.0 || positive_fraction > 1.0)
        throw std::invalid_argument("sample_centers: bad n or positive_fraction");
    const int half = kGlobalWidth / 2;
    const int lo_y = half, hi_y = scene.image.height - half; // inclusive range of centers
    const int lo_x = half, hi_x = scene.image.width - half;
    if (hi_y < lo_y || hi_x < lo_x)
        throw std::invalid_argument("sample_centers: scene too small for the global window");

    const int want_pos = static_cast<int>(std::llround(positive_fraction * n));
    const int want_neg = n - want_pos;
    std::vector<PatchCenter> pos, neg;
    pos.reserve(want_pos);
    neg.reserve(want_neg);
    const long long max_draws = 2000LL * (n > 0 ? n : 1);
    for (long long draw = 0; draw < max_draws; ++draw) {
        if (static_cast<int>(pos.size()) == want_pos && static_cast<int>(neg.size()) == want_neg) break;
        PatchCenter c;
        c.y = lo_y + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi_y - lo_y + 1)));
        c.x = lo_x + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi_x - lo_x + 1)));
        c.positive = label_positive(scene, c.y, c.x);
        if (c.positive && static_cast<int>(pos.size()) < want_pos)
            pos.push_back(c);
        else if (!c.positive && static_cast<int>(neg.size()) < want_neg)
            neg.push_back(c);
    }
    if (static_cast<int>(pos.size()) != want_pos || static_cast<int>(neg.size()) != want_neg)
        throw std::runtime_error("sample_centers: not enough valid centers (wanted " +
                                 std::to_string(want_pos) + " positive / " + std::to_string(want_neg) +
                                 " negative, found " + std::to_string(pos.size()) + "/" +
                                 std::to_string(neg.size()) + ")");

    // deterministic interleave, then shuffle so batches mix classes
    std::vector<PatchCenter> all;
    all.reserve(static_cast<std::size_t>(n));
    all.insert(all.end(), pos.begin(), pos.end());
    all.insert(all.end(), neg.begin(), neg.end());
    rng.shuffle(all);
    return all;
}

std::vector<PatchTriple> sample_triples(const Scene& scene, int n, double positive_fraction, Rng& rng) {
    std::vector<PatchTriple> out;
    out.reserve(static_cast<std::size_t>(n));
    for (const auto& c : sample_centers(scene, n, positive_fraction, rng))
        out.push_back(extract_triple(scene, c.y, c.x));
    return out;
}

GridPlan grid_centers(int height, int width) {
    GridPlan plan;
    plan.tiles_y = (height - 2 * kGridBorder) / kLabelWidth;
    plan.tiles_x = (width - 2 * kGridBorder) / kLabelWidth;
    if (plan.tiles_y < 1 || plan.tiles_x < 1) {
        plan.tiles_y = plan.tiles_x = 0;
        return plan;
    }
    plan.centers.reserve(static_cast<std::size_t>(plan.tiles_y) * plan.tiles_x);
    for (int ty = 0; ty < plan.tiles_y; ++ty)
        for (int tx = 0; tx < plan.tiles_x; ++tx) {
            PatchCenter c;
            c.y = kGridBorder + kLabelWidth * ty + kLabelWidth / 2;
            c.x = kGridBorder + kLabelWidth * tx + kLabelWidth / 2;
            plan.centers.push_back(c);
        }
    return plan;
}

GridPlan grid_centers(const Scene& scene) { return grid_centers(scene.image.height, scene.image.width); }

namespace {

Tensor<float> stack_windows(const ImageF& image, const std::vector<PatchCenter>& centers,
                            std::size_t begin, std::size_t count, int w) {
    Tensor<float> out({count, 3, static_cast<std::size_t>(w), static_cast<std::size_t>(w)});
    float* dst = out.data();
    const std::size_t plane = static_cast<std::size_t>(3) * w * w;
    for (std::size_t i = 0; i < count; ++i) {
        Tensor<float> patch = extract_image_window(image, centers[begin + i].y, centers[begin + i].x, w);
        std::copy(patch.data(), patch.data() + plane, dst + i * plane);
    }
    return out;
}

} // namespace

Tensor<float> stack_local(const Scene& scene, const std::vector<PatchCenter>& centers, std::size_t begin,
                          std::size_t count) {
    return stack_windows(scene.image, centers, begin, count, kLocalWidth);
}

Tensor<float> stack_global(const Scene& scene, const std::vector<PatchCenter>& centers, std::size_t begin,
                           std::size_t count) {
    return stack_windows(scene.image, centers, begin, count, kGlobalWidth);
}

Tensor<float> stack_labels(const Scene& scene, const std::vector<PatchCenter>& centers, std::size_t begin,
                           std::size_t count) {
    const std::size_t n = static_cast<std::size_t>(kLabelWidth) * kLabelWidth;
    Tensor<float> out({count, n});
    for (std::size_t i = 0; i < count; ++i) {
        Tensor<float> label =
            extract_label_window(scene.mask, centers[begin + i].y, centers[begin + i].x, kLabelWidth);
        std::copy(label.data(), label.data() + n, out.data() + i * n);
    }
    return out;
}

} // namespace aeroseg::data
