#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "aeroseg/experiments/ablate.hpp"
#include "aeroseg/experiments/predict.hpp"
#include "aeroseg/experiments/train.hpp"
#include "aeroseg/nn/checkpoint.hpp"

using namespace aeroseg;
using namespace aeroseg::experiments;

namespace {

data::SynthParams train_scene_params(std::uint64_t seed) {
    data::SynthParams p;
    p.seed = seed;
    p.height = p.width = 448;
    p.clusters = 1;
    p.buildings = 14;
    p.roads = 1;
    p.vegetation = 3;
    return p;
}

std::vector<data::Scene> make_scenes(std::uint64_t seed0, int count) {
    std::vector<data::Scene> scenes;
    for (int i = 0; i < count; ++i)
        scenes.push_back(data::generate_scene(train_scene_params(seed0 + static_cast<std::uint64_t>(i))));
    return scenes;
}

bool params_equal(nn::Network<float>& a, nn::Network<float>& b) {
    auto pa = a.named_params(), pb = b.named_params();
    if (pa.size() != pb.size()) return false;
    for (std::size_t i = 0; i < pa.size(); ++i)
        if (pa[i].tensor->values() != pb[i].tensor->values()) return false;
    return true;
}

} // namespace

TEST_CASE("train: lr = 0 leaves parameters untouched") {
    const auto scenes = make_scenes(100, 1);
    TrainConfig cfg;
    cfg.lr = 0.0;
    cfg.arch = "lseg";
    cfg.epochs = 1;
    cfg.max_iterations = 5;
    cfg.triples_per_scene = 60;
    cfg.seed = 3;
    const TrainResult r = train(cfg, scenes, {});

    // re-derive the untouched initial parameters from the same seed
    Rng rng(cfg.seed);
    nn::Network<float> fresh = arch::build_by_name<float>("lseg", arch::Profile::named("desk"));
    fresh.init_params(rng);
    nn::Network<float> got = r.net;
    CHECK(params_equal(got, fresh));
    CHECK(r.log.iteration_loss.size() == 5);
}

TEST_CASE("train: identical seeds give identical run logs and checkpoints") {
    const auto scenes = make_scenes(200, 1);
    TrainConfig cfg;
    cfg.arch = "lseg";
    cfg.epochs = 1;
    cfg.max_iterations = 8;
    cfg.triples_per_scene = 100;
    cfg.seed = 17;
    TrainResult a = train(cfg, scenes, {});
    TrainResult b = train(cfg, scenes, {});
    CHECK(a.log.hash() == b.log.hash());
    CHECK(a.log.iteration_loss == b.log.iteration_loss);
    CHECK(params_equal(a.net, b.net));

    namespace fs = std::filesystem;
    const fs::path p1 = fs::temp_directory_path() / "aeroseg_run_a.ckpt";
    const fs::path p2 = fs::temp_directory_path() / "aeroseg_run_b.ckpt";
    nn::save_checkpoint(p1.string(), a.net);
    nn::save_checkpoint(p2.string(), b.net);
    CHECK(read_text_file(p1.string()) == read_text_file(p2.string()));
    fs::remove(p1);
    fs::remove(p2);
}

TEST_CASE("train: loss explosion aborts with finite parameters") {
    const auto scenes = make_scenes(300, 1);
    TrainConfig cfg;
    cfg.arch = "lseg";
    cfg.lr = 1e6; // guaranteed divergence under summed loss
    cfg.epochs = 1;
    cfg.max_iterations = 50;
    cfg.triples_per_scene = 100;
    cfg.seed = 5;
    TrainResult r = train(cfg, scenes, {});
    CHECK(r.log.aborted_on_nan);
    for (auto& p : r.net.named_params()) CHECK(p.tensor->all_finite());
}

TEST_CASE("train: desk LG-Seg halves its loss within 200 mini-batches (3 seeds)") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const auto scenes = make_scenes(1000 + seed * 10, 2);
        TrainConfig cfg;
        cfg.arch = "lgseg";
        cfg.seed = seed;
        cfg.max_iterations = 200;
        cfg.epochs = 1;
        cfg.triples_per_scene = 1000;
        const TrainResult r = train(cfg, scenes, {});
        REQUIRE(r.log.iteration_loss.size() == 200);
        // compare startup loss against the tail (both averaged over 10 batches)
        double head = 0, tail = 0;
        for (int i = 0; i < 10; ++i) {
            head += r.log.iteration_loss[static_cast<std::size_t>(i)];
            tail += r.log.iteration_loss[r.log.iteration_loss.size() - 1 - static_cast<std::size_t>(i)];
        }
        INFO("seed ", seed, ": head ", head / 10, " tail ", tail / 10);
        CHECK(tail <= 0.5 * head);
    }
}

TEST_CASE("predict: tiles are filled row-major and the border is no-data") {
    // zero weights except a patterned output bias: every tile must show the
    // same sigmoid(bias) pattern at its own offset
    nn::Network<float> net = arch::build_by_name<float>("lseg", arch::Profile::named("desk"));
    Rng rng(7);
    net.init_params(rng);
    for (auto* section : {&net.local_stem, &net.head})
        for (auto& layer : *section)
            if (layer.spec.has_params()) {
                layer.w.fill(0.0f);
                layer.b.fill(0.0f);
            }
    auto& out_bias = net.head[2].b; // final fc bias, 256 wide
    REQUIRE(out_bias.size() == 256);
    for (std::size_t i = 0; i < 256; ++i)
        out_bias[i] = static_cast<float>(static_cast<double>(i % 16) / 8.0 - 1.0);

    const auto scenes = make_scenes(400, 1);
    const data::FloatMap map = predict_image(net, scenes[0]);
    CHECK(map.valid_y0 == 120);
    CHECK(map.valid_h == ((448 - 240) / 16) * 16);

    const data::GridPlan plan = data::grid_centers(scenes[0]);
    for (const auto& c : {plan.centers.front(), plan.centers.back()}) {
        for (int dy = 0; dy < 16; ++dy)
            for (int dx = 0; dx < 16; ++dx) {
                const float want =
                    1.0f / (1.0f + std::exp(-(static_cast<float>((dy * 16 + dx) % 16) / 8.0f - 1.0f)));
                CHECK(map.at(c.y - 8 + dy, c.x - 8 + dx) == doctest::Approx(want).epsilon(1e-5));
            }
    }
    // outside the valid region: no-data zeros
    CHECK(map.at(0, 0) == 0.0f);
    CHECK(map.at(119, 200) == 0.0f);
    // inside: probabilities in (0,1)
    for (int y = map.valid_y0; y < map.valid_y0 + map.valid_h; ++y)
        for (int x = map.valid_x0; x < map.valid_x0 + map.valid_w; ++x) {
            CHECK(map.at(y, x) > 0.0f);
            CHECK(map.at(y, x) < 1.0f);
        }
}

TEST_CASE("predict: undersized image is an error") {
    nn::Network<float> net = arch::build_by_name<float>("lseg", arch::Profile::named("desk"));
    Rng rng(8);
    net.init_params(rng);
    data::Scene tiny;
    tiny.image = data::ImageF(250, 250);
    tiny.mask = data::Mask(250, 250);
    CHECK_THROWS(predict_image(net, tiny));
}

TEST_CASE("predict: RA networks tile their single output value") {
    nn::Network<float> net = arch::build_by_name<float>("ra", arch::Profile::named("desk"));
    Rng rng(9);
    net.init_params(rng);
    const auto scenes = make_scenes(500, 1);
    const data::FloatMap map = predict_image(net, scenes[0]);
    // every 16x16 tile is constant
    const data::GridPlan plan = data::grid_centers(scenes[0]);
    for (const auto& c : plan.centers) {
        const float v = map.at(c.y - 8, c.x - 8);
        for (int dy = 0; dy < 16; ++dy)
            for (int dx = 0; dx < 16; ++dx) CHECK(map.at(c.y - 8 + dy, c.x - 8 + dx) == v);
    }
}

TEST_CASE("ablate: blank=none equals predict_image exactly") {
    nn::Network<float> net = arch::build_by_name<float>("lgseg", arch::Profile::named("desk"));
    Rng rng(10);
    net.init_params(rng);
    const auto scenes = make_scenes(600, 1);
    const data::FloatMap a = predict_image(net, scenes[0]);
    const data::FloatMap b = predict_with_blank(net, scenes[0], BlankPathway::None);
    CHECK(a.pixels == b.pixels);
}

TEST_CASE("ablate: constant-color scene is a fixed point of blanking") {
    nn::Network<float> net = arch::build_by_name<float>("lgseg", arch::Profile::named("desk"));
    Rng rng(11);
    net.init_params(rng);
    data::Scene flat;
    flat.image = data::ImageF(448, 448);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < 448; ++y)
            for (int x = 0; x < 448; ++x) flat.image.at(c, y, x) = 0.25f * (c + 1);
    flat.mask = data::Mask(448, 448);
    const data::FloatMap none = predict_with_blank(net, flat, BlankPathway::None);
    const data::FloatMap local = predict_with_blank(net, flat, BlankPathway::Local);
    const data::FloatMap global = predict_with_blank(net, flat, BlankPathway::Global);
    CHECK(none.pixels == local.pixels);
    CHECK(none.pixels == global.pixels);
}

TEST_CASE("ablate: requires a dual checkpoint") {
    nn::Network<float> net = arch::build_by_name<float>("lseg", arch::Profile::named("desk"));
    Rng rng(12);
    net.init_params(rng);
    const auto scenes = make_scenes(700, 1);
    CHECK_THROWS(run_ablation(net, scenes, eval::RelaxedParams{0}));
}

TEST_CASE("train config: key=value round trip and hashing") {
    TrainConfig cfg;
    cfg.seed = 42;
    cfg.arch = "gseg";
    cfg.lr = 2e-4;
    const TrainConfig back = TrainConfig::from_keyvalues(cfg.to_keyvalues());
    CHECK(back.seed == cfg.seed);
    CHECK(back.arch == cfg.arch);
    CHECK(back.lr == cfg.lr);
    CHECK(back.hash() == cfg.hash());
    TrainConfig other = cfg;
    other.lr = 3e-4;
    CHECK(other.hash() != cfg.hash());

    // paper defaults
    TrainConfig defaults;
    CHECK(defaults.batch_size == 10);
    CHECK(defaults.momentum == 0.9);
    CHECK(defaults.lr == 1e-4);
    CHECK(defaults.weight_decay == 5e-4);
}
