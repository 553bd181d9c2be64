#include "aeroseg/experiments/ablate.hpp"

#include <cstdio>
#include <stdexcept>

namespace aeroseg::experiments {

namespace {

using data::FloatMap;
using data::Mask;
using data::Scene;

struct ModeMaps {
    std::vector<FloatMap> maps;
};

AblationScores score_mode(const std::vector<Scene>& scenes, const std::vector<FloatMap>& maps,
                          double threshold, const eval::RelaxedParams& params) {
    AblationScores s;
    std::vector<std::pair<const FloatMap*, const Mask*>> pairs;
    for (std::size_t i = 0; i < maps.size(); ++i) pairs.emplace_back(&maps[i], &scenes[i].mask);
    s.mean_f = eval::mean_f(pairs, threshold, params);

    std::size_t decoy_pixels = 0, decoy_hits = 0;
    double boundary_sum = 0.0;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const FloatMap& map = maps[i];
        const Mask pred = eval::binarize(map, threshold);
        const Mask gt = map.crop_like_valid(scenes[i].mask);
        boundary_sum += eval::boundary_f_measure(pred, gt);
        for (const auto& o : scenes[i].objects) {
            if (o.cls != "decoy") continue;
            data::for_each_rect_pixel(o, map.height, map.width, [&](int y, int x) {
                const int vy = y - map.valid_y0, vx = x - map.valid_x0;
                if (vy < 0 || vy >= map.valid_h || vx < 0 || vx >= map.valid_w) return;
                ++decoy_pixels;
                decoy_hits += pred.at(vy, vx);
            });
        }
    }
    s.decoy_fp_rate = decoy_pixels == 0 ? 0.0 : static_cast<double>(decoy_hits) / decoy_pixels;
    s.boundary_f = boundary_sum / static_cast<double>(maps.size());
    return s;
}

} // namespace

AblationReport run_ablation(const nn::Network<float>& net, const std::vector<Scene>& scenes,
                            const eval::RelaxedParams& params, double grid_step) {
    if (scenes.empty()) throw std::invalid_argument("run_ablation: no scenes");
    if (net.mode != nn::NetMode::Dual)
        throw std::invalid_argument("run_ablation: requires a dual-mode checkpoint");

    ModeMaps none, local_b, global_b;
    for (const auto& s : scenes) {
        none.maps.push_back(predict_with_blank(net, s, BlankPathway::None));
        local_b.maps.push_back(predict_with_blank(net, s, BlankPathway::Local));
        global_b.maps.push_back(predict_with_blank(net, s, BlankPathway::Global));
    }

    // reference threshold: best mean F of the unblanked model
    std::vector<std::pair<const FloatMap*, const Mask*>> pairs;
    for (std::size_t i = 0; i < none.maps.size(); ++i)
        pairs.emplace_back(&none.maps[i], &scenes[i].mask);
    AblationReport report;
    double best_f = -1.0;
    for (double t : eval::threshold_grid(grid_step)) {
        const double f = eval::mean_f(pairs, t, params);
        if (f > best_f) {
            best_f = f;
            report.threshold = t;
        }
    }

    report.none = score_mode(scenes, none.maps, report.threshold, params);
    report.local_blanked = score_mode(scenes, local_b.maps, report.threshold, params);
    report.global_blanked = score_mode(scenes, global_b.maps, report.threshold, params);
    return report;
}

std::string ablation_csv(const AblationReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "blank,mean_f,decoy_fp_rate,boundary_f\n"
                  "none,%.6f,%.6f,%.6f\n"
                  "local,%.6f,%.6f,%.6f\n"
                  "global,%.6f,%.6f,%.6f\n",
                  r.none.mean_f, r.none.decoy_fp_rate, r.none.boundary_f, r.local_blanked.mean_f,
                  r.local_blanked.decoy_fp_rate, r.local_blanked.boundary_f, r.global_blanked.mean_f,
                  r.global_blanked.decoy_fp_rate, r.global_blanked.boundary_f);
    return buf;
}

} // namespace aeroseg::experiments
