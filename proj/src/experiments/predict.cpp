#include "aeroseg/experiments/predict.hpp"

#include <stdexcept>

namespace aeroseg::experiments {

using data::FloatMap;
using data::PatchCenter;
using data::Scene;

const char* blank_name(BlankPathway b) {
    switch (b) {
        case BlankPathway::None: return "none";
        case BlankPathway::Local: return "local";
        case BlankPathway::Global: return "global";
    }
    return "?";
}

BlankPathway blank_from_name(const std::string& name) {
    if (name == "none") return BlankPathway::None;
    if (name == "local") return BlankPathway::Local;
    if (name == "global") return BlankPathway::Global;
    throw std::invalid_argument("unknown blank pathway: " + name + " (expected none|local|global)");
}

namespace {

// per-channel mean of the whole scene image
void channel_means(const data::ImageF& img, float out[3]) {
    for (int c = 0; c < 3; ++c) {
        double sum = 0.0;
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) sum += img.at(c, y, x);
        out[c] = static_cast<float>(sum / (static_cast<double>(img.height) * img.width));
    }
}

Tensor<float> blank_batch(const float means[3], std::size_t count, int w) {
    Tensor<float> out({count, 3, static_cast<std::size_t>(w), static_cast<std::size_t>(w)});
    float* dst = out.data();
    const std::size_t plane = static_cast<std::size_t>(w) * w;
    for (std::size_t b = 0; b < count; ++b)
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < plane; ++i) *dst++ = means[c];
    return out;
}

} // namespace

FloatMap predict_with_blank(const nn::Network<float>& net, const Scene& scene, BlankPathway blank,
                            int batch) {
    const data::GridPlan plan = data::grid_centers(scene);
    if (plan.centers.empty())
        throw std::invalid_argument("predict_image: image " + std::to_string(scene.image.height) + "x" +
                                    std::to_string(scene.image.width) +
                                    " has no interior tiles (needs > 2*" +
                                    std::to_string(data::kGridBorder) + " per side)");
    if (batch < 1) throw std::invalid_argument("predict_image: batch must be positive");

    float means[3] = {0, 0, 0};
    if (blank != BlankPathway::None) channel_means(scene.image, means);

    FloatMap map(scene.image.height, scene.image.width);
    map.valid_y0 = map.valid_x0 = plan.border;
    map.valid_h = plan.tiles_y * data::kLabelWidth;
    map.valid_w = plan.tiles_x * data::kLabelWidth;

    const int tile = data::kLabelWidth;
    const bool ra = net.mode == nn::NetMode::RaClassifier;
    for (std::size_t begin = 0; begin < plan.centers.size();
         begin += static_cast<std::size_t>(batch)) {
        const std::size_t count =
            std::min<std::size_t>(static_cast<std::size_t>(batch), plan.centers.size() - begin);
        Tensor<float> local, global;
        const Tensor<float>* local_p = nullptr;
        const Tensor<float>* global_p = nullptr;
        if (net.uses_local()) {
            local = blank == BlankPathway::Local
                        ? blank_batch(means, count, data::kLocalWidth)
                        : data::stack_local(scene, plan.centers, begin, count);
            local_p = &local;
        }
        if (net.uses_global()) {
            global = blank == BlankPathway::Global
                         ? blank_batch(means, count, data::kGlobalWidth)
                         : data::stack_global(scene, plan.centers, begin, count);
            global_p = &global;
        }
        const Tensor<float> out = net.forward(local_p, global_p, nullptr);
        for (std::size_t i = 0; i < count; ++i) {
            const PatchCenter& c = plan.centers[begin + i];
            const int y0 = c.y - tile / 2, x0 = c.x - tile / 2;
            for (int y = 0; y < tile; ++y)
                for (int x = 0; x < tile; ++x)
                    map.at(y0 + y, x0 + x) =
                        ra ? out.at2(i, 0)
                           : out.at2(i, static_cast<std::size_t>(y) * tile + x);
        }
    }
    return map;
}

FloatMap predict_image(const nn::Network<float>& net, const Scene& scene, int batch) {
    return predict_with_blank(net, scene, BlankPathway::None, batch);
}

} // namespace aeroseg::experiments
