#include "aeroseg/experiments/train.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "aeroseg/data/scene.hpp"
#include "aeroseg/eval/metrics.hpp"
#include "aeroseg/experiments/predict.hpp"
#include "aeroseg/nn/loss.hpp"
#include "aeroseg/util/hash.hpp"

namespace aeroseg::experiments {

using data::PatchCenter;
using data::Scene;

KeyValueFile TrainConfig::to_keyvalues() const {
    KeyValueFile kv;
    kv.set_int("batch_size", batch_size);
    kv.set_double("momentum", momentum);
    kv.set_double("lr", lr);
    kv.set_double("weight_decay", weight_decay);
    kv.set_int("epochs", epochs);
    kv.set_int("max_iterations", max_iterations);
    kv.set_int("seed", static_cast<long long>(seed));
    kv.set("profile", profile);
    kv.set("arch", arch);
    kv.set("class", positive_class);
    kv.set_int("triples_per_scene", triples_per_scene);
    kv.set_double("positive_fraction", positive_fraction);
    kv.set_int("patience", patience);
    kv.set_double("lr_decay", lr_decay);
    kv.set_int("lr_decay_every", lr_decay_every);
    kv.set_int("val_rho", val_rho);
    kv.set_double("val_grid_step", val_grid_step);
    return kv;
}

TrainConfig TrainConfig::from_keyvalues(const KeyValueFile& kv) {
    TrainConfig c;
    c.batch_size = static_cast<int>(kv.get_int_or("batch_size", c.batch_size));
    c.momentum = kv.get_double_or("momentum", c.momentum);
    c.lr = kv.get_double_or("lr", c.lr);
    c.weight_decay = kv.get_double_or("weight_decay", c.weight_decay);
    c.epochs = static_cast<int>(kv.get_int_or("epochs", c.epochs));
    c.max_iterations = static_cast<int>(kv.get_int_or("max_iterations", c.max_iterations));
    c.seed = static_cast<std::uint64_t>(kv.get_int_or("seed", 1));
    c.profile = kv.get_or("profile", c.profile);
    c.arch = kv.get_or("arch", c.arch);
    c.positive_class = kv.get_or("class", c.positive_class);
    c.triples_per_scene = static_cast<int>(kv.get_int_or("triples_per_scene", c.triples_per_scene));
    c.positive_fraction = kv.get_double_or("positive_fraction", c.positive_fraction);
    c.patience = static_cast<int>(kv.get_int_or("patience", c.patience));
    c.lr_decay = kv.get_double_or("lr_decay", c.lr_decay);
    c.lr_decay_every = static_cast<int>(kv.get_int_or("lr_decay_every", c.lr_decay_every));
    c.val_rho = static_cast<int>(kv.get_int_or("val_rho", c.val_rho));
    c.val_grid_step = kv.get_double_or("val_grid_step", c.val_grid_step);
    return c;
}

std::uint64_t TrainConfig::hash() const { return fnv1a64(to_keyvalues().serialize()); }

std::string RunLog::loss_csv() const {
    std::string out = "iteration,loss\n";
    char buf[64];
    for (std::size_t i = 0; i < iteration_loss.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.9g\n", i + 1, iteration_loss[i]);
        out += buf;
    }
    return out;
}

std::string RunLog::val_csv() const {
    std::string out = "pass,val_f\n";
    char buf[64];
    for (std::size_t i = 0; i < epoch_val_f.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.9g\n", i + 1, epoch_val_f[i]);
        out += buf;
    }
    return out;
}

std::uint64_t RunLog::hash() const {
    std::uint64_t h = fnv1a64(loss_csv());
    h = fnv1a64(val_csv(), h);
    h = fnv1a64(&seed, sizeof(seed), h);
    h = fnv1a64(&config_hash, sizeof(config_hash), h);
    return h;
}

std::vector<Scene> load_split(const data::Manifest& manifest, const std::string& split) {
    std::vector<Scene> scenes;
    for (const auto& e : manifest.with_split(split))
        scenes.push_back(data::load_scene(e.image_path, e.mask_path));
    return scenes;
}

namespace {

struct PoolEntry {
    std::size_t scene;
    PatchCenter center;
};

struct Batch {
    Tensor<float> local, global, target;
};

Batch make_batch(const std::vector<Scene>& scenes, const std::vector<PoolEntry>& pool,
                 std::size_t begin, std::size_t count, const nn::Network<float>& net) {
    Batch b;
    const bool ra = net.mode == nn::NetMode::RaClassifier;
    if (net.uses_local())
        b.local = Tensor<float>({count, 3, data::kLocalWidth, data::kLocalWidth});
    if (net.uses_global())
        b.global = Tensor<float>({count, 3, data::kGlobalWidth, data::kGlobalWidth});
    b.target = Tensor<float>({count, ra ? 1 : static_cast<std::size_t>(data::kLabelWidth) *
                                              data::kLabelWidth});
    for (std::size_t i = 0; i < count; ++i) {
        const PoolEntry& e = pool[begin + i];
        const Scene& scene = scenes[e.scene];
        if (net.uses_local()) {
            Tensor<float> p =
                data::extract_image_window(scene.image, e.center.y, e.center.x, data::kLocalWidth);
            std::copy(p.data(), p.data() + p.size(), b.local.data() + i * p.size());
        }
        if (net.uses_global()) {
            Tensor<float> p =
                data::extract_image_window(scene.image, e.center.y, e.center.x, data::kGlobalWidth);
            std::copy(p.data(), p.data() + p.size(), b.global.data() + i * p.size());
        }
        if (ra) {
            b.target.at2(i, 0) = e.center.positive ? 1.0f : 0.0f;
        } else {
            Tensor<float> l =
                data::extract_label_window(scene.mask, e.center.y, e.center.x, data::kLabelWidth);
            std::copy(l.data(), l.data() + l.size(), b.target.data() + i * l.size());
        }
    }
    return b;
}

double validate(const nn::Network<float>& net, const std::vector<Scene>& val_scenes,
                const TrainConfig& config) {
    std::vector<data::FloatMap> maps;
    maps.reserve(val_scenes.size());
    for (const auto& s : val_scenes) maps.push_back(predict_image(net, s));
    std::vector<std::pair<const data::FloatMap*, const data::Mask*>> pairs;
    for (std::size_t i = 0; i < maps.size(); ++i) pairs.emplace_back(&maps[i], &val_scenes[i].mask);
    const eval::RelaxedParams params{config.val_rho};
    double best = -1.0;
    for (double t : eval::threshold_grid(config.val_grid_step))
        best = std::max(best, eval::mean_f(pairs, t, params));
    return best;
}

} // namespace

TrainResult train(const TrainConfig& config, const std::vector<Scene>& train_scenes,
                  const std::vector<Scene>& val_scenes) {
    if (train_scenes.empty()) throw std::invalid_argument("train: no training scenes");
    if (config.batch_size < 1 || config.epochs < 0 || config.lr < 0)
        throw std::invalid_argument("train: bad config");
    const auto t0 = std::chrono::steady_clock::now();

    Rng rng(config.seed);
    const arch::Profile profile = arch::Profile::named(config.profile);
    TrainResult result{arch::build_by_name<float>(config.arch, profile), {}};
    nn::Network<float>& net = result.net;
    net.positive_class = config.positive_class;
    net.init_params(rng);

    RunLog& log = result.log;
    log.seed = config.seed;
    log.config_hash = config.hash();

    std::vector<PoolEntry> pool;
    for (std::size_t si = 0; si < train_scenes.size(); ++si) {
        auto centers =
            data::sample_centers(train_scenes[si], config.triples_per_scene, config.positive_fraction, rng);
        for (const auto& c : centers) pool.push_back({si, c});
    }
    if (pool.empty()) throw std::invalid_argument("train: empty training pool");

    nn::Gradients<float> grads = net.make_gradients();
    nn::Network<float> best_net = net;
    nn::Network<float> last_good = net;
    double lr = config.lr;
    int iteration = 0;
    int stale_epochs = 0;
    bool stop = false;

    const int epochs = std::max(
        config.epochs,
        config.max_iterations > 0
            ? static_cast<int>((config.max_iterations * static_cast<long long>(config.batch_size) +
                                static_cast<long long>(pool.size()) - 1) /
                               static_cast<long long>(pool.size())) +
                  1
            : 0);

    for (int epoch = 0; epoch < epochs && !stop; ++epoch) {
        rng.shuffle(pool);
        for (std::size_t begin = 0; begin + config.batch_size <= pool.size();
             begin += static_cast<std::size_t>(config.batch_size)) {
            Batch batch = make_batch(train_scenes, pool, begin,
                                     static_cast<std::size_t>(config.batch_size), net);
            nn::Cache<float> cache;
            const Tensor<float> out = net.forward(net.uses_local() ? &batch.local : nullptr,
                                                  net.uses_global() ? &batch.global : nullptr, &cache);
            const auto loss = nn::cross_entropy_loss(out, batch.target);
            if (!std::isfinite(loss.value)) {
                net = last_good; // parameters before the diverging step
                log.aborted_on_nan = true;
                stop = true;
                break;
            }
            log.iteration_loss.push_back(loss.value);
            last_good = net;
            grads.zero();
            net.backward(cache, loss.grad, grads);
            net.sgd_step(grads, static_cast<float>(lr), static_cast<float>(config.momentum),
                         static_cast<float>(config.weight_decay));
            ++iteration;
            if (config.lr_decay_every > 0 && iteration % config.lr_decay_every == 0)
                lr *= config.lr_decay;
            if (config.max_iterations > 0 && iteration >= config.max_iterations) {
                stop = true;
                break;
            }
        }
        if (log.aborted_on_nan) break;
        if (!val_scenes.empty()) {
            const double val_f = validate(net, val_scenes, config);
            log.epoch_val_f.push_back(val_f);
            if (val_f > log.best_val_f) {
                log.best_val_f = val_f;
                log.best_iteration = iteration;
                best_net = net;
                stale_epochs = 0;
            } else if (++stale_epochs >= config.patience) {
                stop = true;
            }
        }
    }

    // best-validation parameters win; without a validation set, final ones
    if (!val_scenes.empty() && log.best_iteration >= 0) net = best_net;

    log.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace aeroseg::experiments
