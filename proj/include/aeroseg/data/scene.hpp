#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "aeroseg/data/image.hpp"
#include "aeroseg/util/config.hpp"
#include "aeroseg/util/rng.hpp"

namespace aeroseg::data {

// Rotated rectangle with its class tag and the pixel bounding box of its
// rasterization (inclusive y0/x0, exclusive y1/x1).
struct SceneObject {
    std::string cls;
    double cy = 0, cx = 0;        // center, continuous coordinates
    double half_h = 0, half_w = 0;
    double angle = 0;             // radians
    int box_y0 = 0, box_x0 = 0, box_y1 = 0, box_x1 = 0;
};

struct Scene {
    ImageF image;
    Mask mask; // 1 where the positive class is present
    std::vector<SceneObject> objects;
};

struct SynthParams {
    std::uint64_t seed = 1;
    int height = 640, width = 640;

    // residential clusters
    int clusters = 2;
    double cluster_radius_min = 40, cluster_radius_max = 55;
    double orientation_jitter = 0.08; // buildings share the cluster angle up to this

    // building-textured squares; round(decoy_fraction * buildings) of them are
    // decoys: same texture, placed far from every cluster, mask 0
    int buildings = 36;
    double building_side_min = 8, building_side_max = 15;
    double decoy_fraction = 0.0;
    double decoy_margin = 85;       // min distance decoy center -> any real building center
    double decoy_separation = 28;   // pairwise decoy gap

    int roads = 2;
    double road_width_min = 5, road_width_max = 9;
    int vegetation = 6;
    double vegetation_side_min = 18, vegetation_side_max = 40;

    double min_separation = 4;      // gap required between any two placed objects
    double noise_sigma = 0.035;
    std::string positive_class = "building";

    KeyValueFile to_keyvalues() const;
    static SynthParams from_keyvalues(const KeyValueFile& kv);
};

// Deterministic per params.seed. Throws (naming the violated constraint)
// when bounded placement retries run out.
Scene generate_scene(const SynthParams& params);

// Pixels whose centers fall inside the rotated rectangle.
template <typename F>
void for_each_rect_pixel(const SceneObject& obj, int height, int width, F&& fn);

// Mask of all objects of `cls` rasterized into an h-by-w grid.
Mask rasterize_objects(const std::vector<SceneObject>& objects, int height, int width,
                       const std::string& cls);

enum class Category { None, I, II, III };
const char* category_name(Category c);

// Band by the number of building rectangles whose boxes intersect the
// window: 0 -> None, 1-5 -> I, 6-15 -> II, >=16 -> III (counts past the
// paper's top band stay in III).
Category residential_category(const std::vector<SceneObject>& objects, int y0, int x0, int h, int w);

// scene_<id>/{image.ppm, mask.pgm, objects.txt}
void save_scene(const std::string& dir, const Scene& scene);
Scene load_scene(const std::string& image_path, const std::string& mask_path);
std::vector<SceneObject> load_objects(const std::string& path);
void save_objects(const std::string& path, const std::vector<SceneObject>& objects);

// ---- inline ----

template <typename F>
void for_each_rect_pixel(const SceneObject& obj, int height, int width, F&& fn) {
    const double c = std::cos(obj.angle), s = std::sin(obj.angle);
    const double reach_y = std::abs(c) * obj.half_h + std::abs(s) * obj.half_w;
    const double reach_x = std::abs(s) * obj.half_h + std::abs(c) * obj.half_w;
    int y0 = static_cast<int>(std::floor(obj.cy - reach_y - 1));
    int y1 = static_cast<int>(std::ceil(obj.cy + reach_y + 1));
    int x0 = static_cast<int>(std::floor(obj.cx - reach_x - 1));
    int x1 = static_cast<int>(std::ceil(obj.cx + reach_x + 1));
    y0 = std::max(y0, 0);
    x0 = std::max(x0, 0);
    y1 = std::min(y1, height - 1);
    x1 = std::min(x1, width - 1);
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double dy = (y + 0.5) - obj.cy;
            const double dx = (x + 0.5) - obj.cx;
            const double u = c * dy + s * dx;   // along half_h
            const double v = -s * dy + c * dx;  // along half_w
            if (std::abs(u) <= obj.half_h && std::abs(v) <= obj.half_w) fn(y, x);
        }
    }
}

} // namespace aeroseg::data
