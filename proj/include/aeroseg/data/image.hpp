#pragma once

#include <cstdint>
#include <vector>

namespace aeroseg::data {

// Planar RGB image, values in [0,1]. Generated scenes are pre-quantized to
// the 8-bit grid so the in-memory image and its PPM round-trip are identical.
struct ImageF {
    int height = 0, width = 0;
    std::vector<float> pixels; // 3 * height * width, planar [c][y][x]

    ImageF() = default;
    ImageF(int h, int w) : height(h), width(w), pixels(static_cast<std::size_t>(3) * h * w, 0.0f) {}

    float& at(int c, int y, int x) {
        return pixels[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    float at(int c, int y, int x) const {
        return pixels[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
};

// Binary mask, one byte per pixel, values in {0,1}.
struct Mask {
    int height = 0, width = 0;
    std::vector<std::uint8_t> pixels;

    Mask() = default;
    Mask(int h, int w) : height(h), width(w), pixels(static_cast<std::size_t>(h) * w, 0) {}

    std::uint8_t& at(int y, int x) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int y, int x) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::size_t count() const {
        std::size_t n = 0;
        for (auto v : pixels) n += v;
        return n;
    }
};

// Real-valued map (probabilities) with a valid interior rectangle; pixels
// outside it are no-data (predictions exclude a border that cannot fit the
// global window).
struct FloatMap {
    int height = 0, width = 0;
    int valid_y0 = 0, valid_x0 = 0, valid_h = 0, valid_w = 0;
    std::vector<float> pixels;

    FloatMap() = default;
    FloatMap(int h, int w)
        : height(h), width(w), valid_y0(0), valid_x0(0), valid_h(h), valid_w(w),
          pixels(static_cast<std::size_t>(h) * w, 0.0f) {}

    float& at(int y, int x) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    float at(int y, int x) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    // crop to the valid rectangle
    FloatMap valid_region() const {
        FloatMap out(valid_h, valid_w);
        for (int y = 0; y < valid_h; ++y)
            for (int x = 0; x < valid_w; ++x) out.at(y, x) = at(valid_y0 + y, valid_x0 + x);
        return out;
    }

    // crop a full-size mask to this map's valid rectangle
    Mask crop_like_valid(const Mask& full) const {
        Mask out(valid_h, valid_w);
        for (int y = 0; y < valid_h; ++y)
            for (int x = 0; x < valid_w; ++x) out.at(y, x) = full.at(valid_y0 + y, valid_x0 + x);
        return out;
    }
};

} // namespace aeroseg::data
