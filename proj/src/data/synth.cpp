#include "aeroseg/data/scene.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "aeroseg/data/pnm.hpp"

namespace aeroseg::data {

KeyValueFile SynthParams::to_keyvalues() const {
    KeyValueFile kv;
    kv.set_int("seed", static_cast<long long>(seed));
    kv.set_int("height", height);
    kv.set_int("width", width);
    kv.set_int("clusters", clusters);
    kv.set_double("cluster.radius_min", cluster_radius_min);
    kv.set_double("cluster.radius_max", cluster_radius_max);
    kv.set_double("cluster.orientation_jitter", orientation_jitter);
    kv.set_int("buildings", buildings);
    kv.set_double("building.side_min", building_side_min);
    kv.set_double("building.side_max", building_side_max);
    kv.set_double("decoy.fraction", decoy_fraction);
    kv.set_double("decoy.margin", decoy_margin);
    kv.set_double("decoy.separation", decoy_separation);
    kv.set_int("roads", roads);
    kv.set_double("road.width_min", road_width_min);
    kv.set_double("road.width_max", road_width_max);
    kv.set_int("vegetation", vegetation);
    kv.set_double("vegetation.side_min", vegetation_side_min);
    kv.set_double("vegetation.side_max", vegetation_side_max);
    kv.set_double("min_separation", min_separation);
    kv.set_double("noise_sigma", noise_sigma);
    kv.set("positive_class", positive_class);
    return kv;
}

SynthParams SynthParams::from_keyvalues(const KeyValueFile& kv) {
    SynthParams p;
    p.seed = static_cast<std::uint64_t>(kv.get_int_or("seed", 1));
    p.height = static_cast<int>(kv.get_int_or("height", p.height));
    p.width = static_cast<int>(kv.get_int_or("width", p.width));
    p.clusters = static_cast<int>(kv.get_int_or("clusters", p.clusters));
    p.cluster_radius_min = kv.get_double_or("cluster.radius_min", p.cluster_radius_min);
    p.cluster_radius_max = kv.get_double_or("cluster.radius_max", p.cluster_radius_max);
    p.orientation_jitter = kv.get_double_or("cluster.orientation_jitter", p.orientation_jitter);
    p.buildings = static_cast<int>(kv.get_int_or("buildings", p.buildings));
    p.building_side_min = kv.get_double_or("building.side_min", p.building_side_min);
    p.building_side_max = kv.get_double_or("building.side_max", p.building_side_max);
    p.decoy_fraction = kv.get_double_or("decoy.fraction", p.decoy_fraction);
    p.decoy_margin = kv.get_double_or("decoy.margin", p.decoy_margin);
    p.decoy_separation = kv.get_double_or("decoy.separation", p.decoy_separation);
    p.roads = static_cast<int>(kv.get_int_or("roads", p.roads));
    p.road_width_min = kv.get_double_or("road.width_min", p.road_width_min);
    p.road_width_max = kv.get_double_or("road.width_max", p.road_width_max);
    p.vegetation = static_cast<int>(kv.get_int_or("vegetation", p.vegetation));
    p.vegetation_side_min = kv.get_double_or("vegetation.side_min", p.vegetation_side_min);
    p.vegetation_side_max = kv.get_double_or("vegetation.side_max", p.vegetation_side_max);
    p.min_separation = kv.get_double_or("min_separation", p.min_separation);
    p.noise_sigma = kv.get_double_or("noise_sigma", p.noise_sigma);
    p.positive_class = kv.get_or("positive_class", p.positive_class);
    return p;
}

const char* category_name(Category c) {
    switch (c) {
        case Category::None: return "none";
        case Category::I: return "I";
        case Category::II: return "II";
        case Category::III: return "III";
    }
    return "?";
}

Category residential_category(const std::vector<SceneObject>& objects, int y0, int x0, int h, int w) {
    int count = 0;
    for (const auto& o : objects) {
        if (o.cls != "building") continue;
        if (o.box_y1 <= y0 || o.box_y0 >= y0 + h || o.box_x1 <= x0 || o.box_x0 >= x0 + w) continue;
        ++count;
    }
    if (count == 0) return Category::None;
    if (count <= 5) return Category::I;
    if (count <= 15) return Category::II;
    return Category::III;
}

Mask rasterize_objects(const std::vector<SceneObject>& objects, int height, int width,
                       const std::string& cls) {
    Mask m(height, width);
    for (const auto& o : objects) {
        if (o.cls != cls) continue;
        for_each_rect_pixel(o, height, width, [&](int y, int x) { m.at(y, x) = 1; });
    }
    return m;
}

namespace {

struct Placer {
    const SynthParams& p;
    Rng& rng;
    std::vector<SceneObject>& objects;

    // conservative overlap test on dilated raster boxes
    bool collides(const SceneObject& cand) const {
        const double gap = p.min_separation;
        for (const auto& o : objects) {
            if (cand.box_y0 - gap < o.box_y1 && cand.box_y1 + gap > o.box_y0 &&
                cand.box_x0 - gap < o.box_x1 && cand.box_x1 + gap > o.box_x0)
                return true;
        }
        return false;
    }
};

// raster AABB; returns false when nothing rasterizes
bool compute_box(SceneObject& o, int height, int width) {
    int y0 = height, x0 = width, y1 = -1, x1 = -1;
    for_each_rect_pixel(o, height, width, [&](int y, int x) {
        y0 = std::min(y0, y);
        x0 = std::min(x0, x);
        y1 = std::max(y1, y);
        x1 = std::max(x1, x);
    });
    if (y1 < 0) return false;
    o.box_y0 = y0;
    o.box_x0 = x0;
    o.box_y1 = y1 + 1;
    o.box_x1 = x1 + 1;
    return true;
}

float clamp01(double v) { return static_cast<float>(v < 0 ? 0 : (v > 1 ? 1 : v)); }

// same texture routine for buildings and decoys
void draw_square_texture(ImageF& img, const SceneObject& o, Rng& rng, double sigma) {
    const double r0 = rng.uniform(0.62, 0.88);
    const double g0 = r0 - rng.uniform(0.08, 0.18);
    const double b0 = r0 - rng.uniform(0.16, 0.28);
    for_each_rect_pixel(o, img.height, img.width, [&](int y, int x) {
        img.at(0, y, x) = clamp01(r0 + rng.normal() * sigma);
        img.at(1, y, x) = clamp01(g0 + rng.normal() * sigma);
        img.at(2, y, x) = clamp01(b0 + rng.normal() * sigma);
    });
}

void draw_flat_texture(ImageF& img, const SceneObject& o, Rng& rng, double sigma, double r0, double g0,
                       double b0) {
    for_each_rect_pixel(o, img.height, img.width, [&](int y, int x) {
        img.at(0, y, x) = clamp01(r0 + rng.normal() * sigma);
        img.at(1, y, x) = clamp01(g0 + rng.normal() * sigma);
        img.at(2, y, x) = clamp01(b0 + rng.normal() * sigma);
    });
}

} // namespace

Scene generate_scene(const SynthParams& p) {
    if (p.height < 256 + 16 || p.width < 256 + 16)
        throw std::invalid_argument("generate_scene: scene must be at least " + std::to_string(256 + 16) +
                                    " on each side");
    if (p.decoy_fraction < 0 || p.decoy_fraction > 1)
        throw std::invalid_argument("generate_scene: decoy_fraction must be in [0,1]");
    Rng rng(p.seed);
    Scene scene;
    scene.image = ImageF(p.height, p.width);
    ImageF& img = scene.image;

    // background: green base + slow sinusoid drift + grain
    double amp[3], fy[3], fx[3], ph[3];
    for (int k = 0; k < 3; ++k) {
        amp[k] = rng.uniform(0.015, 0.035);
        fy[k] = rng.uniform(0.002, 0.012);
        fx[k] = rng.uniform(0.002, 0.012);
        ph[k] = rng.uniform(0.0, 6.28318530717958648);
    }
    const double base[3] = {0.30, 0.42, 0.24};
    for (int y = 0; y < p.height; ++y) {
        for (int x = 0; x < p.width; ++x) {
            double drift = 0;
            for (int k = 0; k < 3; ++k)
                drift += amp[k] * std::sin(6.28318530717958648 * (fy[k] * y + fx[k] * x) + ph[k]);
            for (int c = 0; c < 3; ++c)
                img.at(c, y, x) = clamp01(base[c] + drift + rng.normal() * p.noise_sigma);
        }
    }

    Placer placer{p, rng, scene.objects};
    const int max_tries = 1000;

    // roads: full-span strips
    for (int i = 0; i < p.roads; ++i) {
        const bool horizontal = rng.uniform() < 0.5;
        const double width = rng.uniform(p.road_width_min, p.road_width_max);
        SceneObject o;
        o.cls = "road";
        bool placed = false;
        for (int t = 0; t < max_tries && !placed; ++t) {
            if (horizontal) {
                o.cy = rng.uniform(20, p.height - 20);
                o.cx = p.width / 2.0;
                o.half_h = width / 2;
                o.half_w = p.width / 2.0;
            } else {
                o.cy = p.height / 2.0;
                o.cx = rng.uniform(20, p.width - 20);
                o.half_h = p.height / 2.0;
                o.half_w = width / 2;
            }
            o.angle = 0;
            if (!compute_box(o, p.height, p.width)) continue;
            if (placer.collides(o)) continue;
            placed = true;
        }
        if (!placed)
            throw std::runtime_error("generate_scene: failed to place road " + std::to_string(i) +
                                     " after bounded retries (min_separation constraint)");
        scene.objects.push_back(o);
    }

    // cluster geometry
    struct Cluster {
        double cy, cx, radius, angle;
    };
    std::vector<Cluster> clusters;
    const double interior_lo = 124;
    const double interior_hi_y = p.height - 124;
    const double interior_hi_x = p.width - 124;
    for (int i = 0; i < p.clusters; ++i) {
        Cluster c{};
        bool placed = false;
        for (int t = 0; t < max_tries && !placed; ++t) {
            c.radius = rng.uniform(p.cluster_radius_min, p.cluster_radius_max);
            c.cy = rng.uniform(interior_lo + 10, interior_hi_y - 10);
            c.cx = rng.uniform(interior_lo + 10, interior_hi_x - 10);
            c.angle = rng.uniform(-0.35, 0.35);
            placed = true;
            for (const auto& other : clusters) {
                const double d = std::hypot(c.cy - other.cy, c.cx - other.cx);
                if (d < c.radius + other.radius + 40) {
                    placed = false;
                    break;
                }
            }
        }
        if (!placed)
            throw std::runtime_error("generate_scene: failed to place cluster " + std::to_string(i) +
                                     " after bounded retries (cluster spacing constraint)");
        clusters.push_back(c);
    }

    const int n_decoys = static_cast<int>(std::llround(p.decoy_fraction * p.buildings));
    const int n_real = p.buildings - n_decoys;
    if (n_real > 0 && clusters.empty())
        throw std::runtime_error("generate_scene: buildings requested but clusters == 0");

    // real buildings, round-robin across clusters, shared cluster orientation
    for (int i = 0; i < n_real; ++i) {
        const Cluster& c = clusters[static_cast<std::size_t>(i) % clusters.size()];
        SceneObject o;
        o.cls = "building";
        bool placed = false;
        for (int t = 0; t < max_tries && !placed; ++t) {
            const double ang = rng.uniform(0.0, 6.28318530717958648);
            const double rad = c.radius * std::sqrt(rng.uniform());
            o.cy = c.cy + rad * std::sin(ang);
            o.cx = c.cx + rad * std::cos(ang);
            o.half_h = rng.uniform(p.building_side_min, p.building_side_max) / 2;
            o.half_w = rng.uniform(p.building_side_min, p.building_side_max) / 2;
            o.angle = c.angle + rng.uniform(-p.orientation_jitter, p.orientation_jitter);
            if (!compute_box(o, p.height, p.width)) continue;
            if (o.box_y0 < interior_lo || o.box_y1 > interior_hi_y || o.box_x0 < interior_lo ||
                o.box_x1 > interior_hi_x)
                continue;
            if (placer.collides(o)) continue;
            placed = true;
        }
        if (!placed)
            throw std::runtime_error("generate_scene: failed to place building " + std::to_string(i) +
                                     " after bounded retries (interior bounds / min_separation)");
        scene.objects.push_back(o);
    }

    // decoys: same square distribution, far from every real building
    for (int i = 0; i < n_decoys; ++i) {
        SceneObject o;
        o.cls = "decoy";
        bool placed = false;
        for (int t = 0; t < max_tries && !placed; ++t) {
            o.cy = rng.uniform(interior_lo + 8, interior_hi_y - 8);
            o.cx = rng.uniform(interior_lo + 8, interior_hi_x - 8);
            const double side = rng.uniform(p.building_side_min, p.building_side_max);
            o.half_h = o.half_w = side / 2;
            o.angle = rng.uniform(-0.35, 0.35);
            if (!compute_box(o, p.height, p.width)) continue;
            if (o.box_y0 < interior_lo || o.box_y1 > interior_hi_y || o.box_x0 < interior_lo ||
                o.box_x1 > interior_hi_x)
                continue;
            bool ok = true;
            for (const auto& other : scene.objects) {
                if (other.cls == "building" &&
                    std::hypot(o.cy - other.cy, o.cx - other.cx) < p.decoy_margin) {
                    ok = false;
                    break;
                }
                if (other.cls == "decoy" &&
                    std::hypot(o.cy - other.cy, o.cx - other.cx) < p.decoy_separation) {
                    ok = false;
                    break;
                }
            }
            if (!ok || placer.collides(o)) continue;
            placed = true;
        }
        if (!placed)
            throw std::runtime_error("generate_scene: failed to place decoy " + std::to_string(i) +
                                     " after bounded retries (decoy margin/separation constraints)");
        scene.objects.push_back(o);
    }

    // vegetation patches
    for (int i = 0; i < p.vegetation; ++i) {
        SceneObject o;
        o.cls = "vegetation";
        bool placed = false;
        for (int t = 0; t < max_tries && !placed; ++t) {
            o.cy = rng.uniform(10, p.height - 10);
            o.cx = rng.uniform(10, p.width - 10);
            o.half_h = rng.uniform(p.vegetation_side_min, p.vegetation_side_max) / 2;
            o.half_w = rng.uniform(p.vegetation_side_min, p.vegetation_side_max) / 2;
            o.angle = rng.uniform(-0.8, 0.8);
            if (!compute_box(o, p.height, p.width)) continue;
            if (placer.collides(o)) continue;
            placed = true;
        }
        if (!placed)
            throw std::runtime_error("generate_scene: failed to place vegetation " + std::to_string(i) +
                                     " after bounded retries (min_separation constraint)");
        scene.objects.push_back(o);
    }

    // draw in class order so draws never overlap placement decisions
    for (const auto& o : scene.objects) {
        if (o.cls == "road") draw_flat_texture(img, o, rng, p.noise_sigma, 0.46, 0.46, 0.47);
    }
    for (const auto& o : scene.objects) {
        if (o.cls == "vegetation")
            draw_flat_texture(img, o, rng, p.noise_sigma, rng.uniform(0.10, 0.18),
                              rng.uniform(0.28, 0.40), rng.uniform(0.08, 0.16));
    }
    for (const auto& o : scene.objects) {
        if (o.cls == "building" || o.cls == "decoy")
            draw_square_texture(img, o, rng, p.noise_sigma);
    }

    // snap to the 8-bit grid so PPM round trips exactly
    for (auto& v : img.pixels)
        v = static_cast<float>(std::floor(v * 255.0f + 0.5f)) / 255.0f;

    scene.mask = rasterize_objects(scene.objects, p.height, p.width, p.positive_class);
    return scene;
}

void save_objects(const std::string& path, const std::vector<SceneObject>& objects) {
    std::ostringstream out;
    for (const auto& o : objects)
        out << o.cls << ' ' << format_double(o.cy) << ' ' << format_double(o.cx) << ' '
            << format_double(o.half_h) << ' ' << format_double(o.half_w) << ' '
            << format_double(o.angle) << ' ' << o.box_y0 << ' ' << o.box_x0 << ' ' << o.box_y1 << ' '
            << o.box_x1 << '\n';
    write_text_file(path, out.str());
}

std::vector<SceneObject> load_objects(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::vector<SceneObject> objects;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        SceneObject o;
        if (!(ls >> o.cls >> o.cy >> o.cx >> o.half_h >> o.half_w >> o.angle >> o.box_y0 >> o.box_x0 >>
              o.box_y1 >> o.box_x1))
            throw std::runtime_error(path + ": bad object line: " + line);
        objects.push_back(o);
    }
    return objects;
}

void save_scene(const std::string& dir, const Scene& scene) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    save_ppm(dir + "/image.ppm", scene.image);
    save_pgm_mask(dir + "/mask.pgm", scene.mask);
    save_objects(dir + "/objects.txt", scene.objects);
}

Scene load_scene(const std::string& image_path, const std::string& mask_path) {
    Scene s;
    s.image = load_ppm(image_path);
    s.mask = load_pgm_mask(mask_path);
    const std::string objects_path =
        std::filesystem::path(image_path).parent_path() / "objects.txt";
    if (std::filesystem::exists(objects_path)) s.objects = load_objects(objects_path);
    return s;
}

} // namespace aeroseg::data
