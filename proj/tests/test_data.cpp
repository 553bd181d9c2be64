#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "aeroseg/data/manifest.hpp"
#include "aeroseg/data/patches.hpp"
#include "aeroseg/data/pnm.hpp"
#include "aeroseg/data/rawmap.hpp"
#include "aeroseg/data/scene.hpp"

using namespace aeroseg;
using namespace aeroseg::data;

namespace {

SynthParams small_params(std::uint64_t seed) {
    SynthParams p;
    p.seed = seed;
    p.height = p.width = 448;
    p.clusters = 1;
    p.buildings = 10;
    p.roads = 1;
    p.vegetation = 3;
    return p;
}

} // namespace

TEST_CASE("generate_scene: fixed seed reproduces the scene bit for bit") {
    const SynthParams p = small_params(7);
    const Scene a = generate_scene(p);
    const Scene b = generate_scene(p);
    CHECK(a.image.pixels == b.image.pixels);
    CHECK(a.mask.pixels == b.mask.pixels);
    REQUIRE(a.objects.size() == b.objects.size());
    for (std::size_t i = 0; i < a.objects.size(); ++i) {
        CHECK(a.objects[i].cls == b.objects[i].cls);
        CHECK(a.objects[i].cy == b.objects[i].cy);
        CHECK(a.objects[i].angle == b.objects[i].angle);
    }
}

TEST_CASE("generate_scene: zero buildings give an all-zero mask") {
    SynthParams p = small_params(3);
    p.buildings = 0;
    const Scene s = generate_scene(p);
    CHECK(s.mask.count() == 0);
}

TEST_CASE("generate_scene: decoy fraction 0.5 of 100 squares yields exactly 50 decoys") {
    SynthParams p;
    p.seed = 11;
    p.height = p.width = 768;
    p.clusters = 2;
    p.cluster_radius_min = 50;
    p.cluster_radius_max = 70;
    p.buildings = 100;
    p.building_side_min = 6;
    p.building_side_max = 10;
    p.decoy_fraction = 0.5;
    p.decoy_margin = 60;
    p.decoy_separation = 18;
    p.roads = 1;
    p.vegetation = 2;
    const Scene s = generate_scene(p);
    std::size_t decoys = 0, buildings = 0;
    for (const auto& o : s.objects) {
        decoys += o.cls == "decoy";
        buildings += o.cls == "building";
    }
    CHECK(decoys == 50);
    CHECK(buildings == 50);
    // decoys carry no mask
    for (const auto& o : s.objects) {
        if (o.cls != "decoy") continue;
        for_each_rect_pixel(o, s.mask.height, s.mask.width,
                            [&](int y, int x) { CHECK(s.mask.at(y, x) == 0); });
    }
}

TEST_CASE("generate_scene: metadata rectangles rasterize back to the mask") {
    SynthParams p = small_params(5);
    p.buildings = 12;
    const Scene s = generate_scene(p);
    const Mask again = rasterize_objects(s.objects, s.mask.height, s.mask.width, "building");
    CHECK(s.mask.pixels == again.pixels);
    // and every building rectangle is fully covered by 1s
    for (const auto& o : s.objects) {
        if (o.cls != "building") continue;
        for_each_rect_pixel(o, s.mask.height, s.mask.width,
                            [&](int y, int x) { CHECK(s.mask.at(y, x) == 1); });
    }
}

TEST_CASE("generate_scene: infeasible placement names the constraint") {
    SynthParams p = small_params(9);
    p.buildings = 5000; // cannot fit
    CHECK_THROWS_WITH_AS(generate_scene(p), doctest::Contains("bounded retries"), std::runtime_error);
}

TEST_CASE("triples: re-extraction from the scene reproduces stored patches") {
    const Scene s = generate_scene(small_params(21));
    Rng rng(1);
    std::size_t checked = 0;
    for (int chunk = 0; chunk < 20; ++chunk) {
        const auto triples = sample_triples(s, 50, 0.5, rng);
        for (const auto& t : triples) {
            const PatchTriple again = extract_triple(s, t.center.y, t.center.x);
            CHECK(t.local.values() == again.local.values());
            CHECK(t.global.values() == again.global.values());
            CHECK(t.label.values() == again.label.values());
            ++checked;
        }
    }
    CHECK(checked == 1000);
}

TEST_CASE("triples: quota sampling is exact") {
    const Scene s = generate_scene(small_params(22));
    Rng rng(2);
    const auto centers = sample_centers(s, 800, 0.125, rng);
    std::size_t positives = 0;
    for (const auto& c : centers) positives += c.positive;
    CHECK(centers.size() == 800);
    CHECK(positives == 100);
}

TEST_CASE("triples: zero fraction on an empty mask is trivially satisfiable") {
    SynthParams p = small_params(23);
    p.buildings = 0;
    const Scene s = generate_scene(p);
    Rng rng(3);
    const auto centers = sample_centers(s, 64, 0.0, rng);
    CHECK(centers.size() == 64);
    for (const auto& c : centers) CHECK_FALSE(c.positive);
    // but a positive quota cannot be met
    CHECK_THROWS_WITH_AS(sample_centers(s, 64, 0.5, rng), doctest::Contains("not enough valid centers"),
                         std::runtime_error);
}

TEST_CASE("grid: 512 scene tiles to 17x17 = 289 centers") {
    const GridPlan plan = grid_centers(512, 512);
    CHECK(plan.tiles_y == 17);
    CHECK(plan.tiles_x == 17);
    CHECK(plan.centers.size() == 289);
    CHECK(plan.border == 120);
    // adjacent centers differ by exactly 16 in one coordinate
    CHECK(plan.centers[1].x - plan.centers[0].x == 16);
    CHECK(plan.centers[1].y == plan.centers[0].y);
    CHECK(plan.centers[17].y - plan.centers[0].y == 16);

    // tiles partition the interior: each interior pixel covered exactly once
    std::vector<int> cover(512 * 512, 0);
    for (const auto& c : plan.centers)
        for (int y = c.y - 8; y < c.y + 8; ++y)
            for (int x = c.x - 8; x < c.x + 8; ++x) ++cover[static_cast<std::size_t>(y) * 512 + x];
    for (int y = 0; y < 512; ++y)
        for (int x = 0; x < 512; ++x) {
            const bool interior = y >= 120 && y < 512 - 120 && x >= 120 && x < 512 - 120;
            CHECK(cover[static_cast<std::size_t>(y) * 512 + x] == (interior ? 1 : 0));
        }
}

TEST_CASE("residential_category bands") {
    auto make = [](int count) {
        std::vector<SceneObject> objects;
        for (int i = 0; i < count; ++i) {
            SceneObject o;
            o.cls = "building";
            o.box_y0 = 10 + 12 * i;
            o.box_y1 = o.box_y0 + 8;
            o.box_x0 = 10;
            o.box_x1 = 18;
            objects.push_back(o);
        }
        return objects;
    };
    CHECK(residential_category(make(0), 0, 0, 600, 600) == Category::None);
    CHECK(residential_category(make(3), 0, 0, 600, 600) == Category::I);
    CHECK(residential_category(make(7), 0, 0, 600, 600) == Category::II);
    CHECK(residential_category(make(20), 0, 0, 600, 600) == Category::III);
    CHECK(residential_category(make(42), 0, 0, 600, 600) == Category::III);
    // objects outside the window do not count
    CHECK(residential_category(make(7), 0, 200, 600, 600) == Category::None);
}

TEST_CASE("pnm: bit-exact ppm round trip") {
    namespace fs = std::filesystem;
    Rng rng(31);
    ImageF img(13, 9);
    for (auto& v : img.pixels)
        v = static_cast<float>(rng.uniform_int(0, 255)) / 255.0f;
    const fs::path path = fs::temp_directory_path() / "aeroseg_test.ppm";
    save_ppm(path.string(), img);
    const ImageF back = load_ppm(path.string());
    CHECK(back.pixels == img.pixels);

    // identical bytes when saved again
    const fs::path path2 = fs::temp_directory_path() / "aeroseg_test2.ppm";
    save_ppm(path2.string(), back);
    CHECK(read_text_file(path.string()) == read_text_file(path2.string()));
    fs::remove(path);
    fs::remove(path2);
}

TEST_CASE("pnm: mask bytes are exactly {0,255}") {
    namespace fs = std::filesystem;
    Mask m(4, 5);
    m.at(1, 2) = 1;
    m.at(3, 4) = 1;
    const fs::path path = fs::temp_directory_path() / "aeroseg_mask.pgm";
    save_pgm_mask(path.string(), m);
    const Mask back = load_pgm_mask(path.string());
    CHECK(back.pixels == m.pixels);

    // a 128 byte is neither 0 nor 255
    std::string bytes = read_text_file(path.string());
    bytes[bytes.size() - 1] = static_cast<char>(128);
    write_text_file(path.string(), bytes);
    CHECK_THROWS(load_pgm_mask(path.string()));
    fs::remove(path);
}

TEST_CASE("pnm: probability 0.5 quantizes to byte 128") {
    CHECK(quantize_byte(0.5f) == 128);
    CHECK(quantize_byte(0.0f) == 0);
    CHECK(quantize_byte(1.0f) == 255);
    CHECK(quantize_byte(0.998f) == 254);
}

TEST_CASE("pnm: malformed headers fail with a byte offset") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "aeroseg_bad.ppm";
    write_text_file(path.string(), "P5\n3 3\n255\n_________");
    CHECK_THROWS_WITH_AS(load_ppm(path.string()), doctest::Contains("byte 0"), std::runtime_error);
    write_text_file(path.string(), "P6\n3 x\n255\n");
    CHECK_THROWS_WITH_AS(load_ppm(path.string()), doctest::Contains("byte"), std::runtime_error);
    write_text_file(path.string(), "P6\n3 3\n254\n_________");
    CHECK_THROWS(load_ppm(path.string()));
    fs::remove(path);
}

TEST_CASE("rawmap: lossless round trip with valid region") {
    namespace fs = std::filesystem;
    Rng rng(32);
    FloatMap map(20, 24);
    map.valid_y0 = 3;
    map.valid_x0 = 4;
    map.valid_h = 10;
    map.valid_w = 12;
    for (auto& v : map.pixels) v = static_cast<float>(rng.uniform());
    const fs::path path = fs::temp_directory_path() / "aeroseg_map.f32";
    save_rawmap(path.string(), map);
    const FloatMap back = load_rawmap(path.string());
    CHECK(back.pixels == map.pixels);
    CHECK(back.valid_y0 == 3);
    CHECK(back.valid_w == 12);
    fs::remove(path);
}

TEST_CASE("scene io: ppm/pgm/objects survive a save/load cycle") {
    namespace fs = std::filesystem;
    const Scene s = generate_scene(small_params(41));
    const fs::path dir = fs::temp_directory_path() / "aeroseg_scene";
    save_scene(dir.string(), s);
    const Scene back = load_scene((dir / "image.ppm").string(), (dir / "mask.pgm").string());
    CHECK(back.image.pixels == s.image.pixels); // pre-quantized, so exact
    CHECK(back.mask.pixels == s.mask.pixels);
    REQUIRE(back.objects.size() == s.objects.size());
    for (std::size_t i = 0; i < s.objects.size(); ++i) {
        CHECK(back.objects[i].cls == s.objects[i].cls);
        CHECK(back.objects[i].cy == s.objects[i].cy);       // %.17g round trip
        CHECK(back.objects[i].angle == s.objects[i].angle);
        CHECK(back.objects[i].box_y1 == s.objects[i].box_y1);
    }
    fs::remove_all(dir);
}

TEST_CASE("manifest: parse, resolve, filter, reject bad splits") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "aeroseg_manifest";
    fs::create_directories(dir);
    const fs::path path = dir / "manifest.txt";
    write_text_file(path.string(),
                    "s1\ta/image.ppm\ta/mask.pgm\ttrain\n"
                    "s2\tb/image.ppm\tb/mask.pgm\ttest\n");
    const Manifest m = load_manifest(path.string());
    REQUIRE(m.entries.size() == 2);
    CHECK(m.with_split("train").size() == 1);
    CHECK(m.with_split("test")[0].scene_id == "s2");
    CHECK(fs::path(m.entries[0].image_path).is_absolute());

    save_manifest(path.string(), m);
    const Manifest again = load_manifest(path.string());
    CHECK(again.entries[1].mask_path == m.entries[1].mask_path);

    write_text_file(path.string(), "s1\ta\tb\tvalidation\n");
    CHECK_THROWS(load_manifest(path.string()));
    fs::remove_all(dir);
}

TEST_CASE("synth params: key=value round trip") {
    SynthParams p = small_params(55);
    p.decoy_fraction = 0.3;
    const KeyValueFile kv = p.to_keyvalues();
    const SynthParams q = SynthParams::from_keyvalues(kv);
    CHECK(q.seed == p.seed);
    CHECK(q.height == p.height);
    CHECK(q.decoy_fraction == p.decoy_fraction);
    CHECK(q.positive_class == p.positive_class);
}
