#include "aeroseg/eval/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace aeroseg::eval {

Mask dilate_disk(const Mask& mask, int rho) {
    if (rho < 0) throw std::invalid_argument("dilate_disk: rho must be nonnegative");
    if (rho == 0) return mask;
    // disk offsets once
    std::vector<std::pair<int, int>> disk;
    for (int dy = -rho; dy <= rho; ++dy)
        for (int dx = -rho; dx <= rho; ++dx)
            if (dy * dy + dx * dx <= rho * rho) disk.emplace_back(dy, dx);
    Mask out(mask.height, mask.width);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(y, x)) continue;
            for (auto [dy, dx] : disk) {
                const int yy = y + dy, xx = x + dx;
                if (yy >= 0 && yy < mask.height && xx >= 0 && xx < mask.width) out.at(yy, xx) = 1;
            }
        }
    }
    return out;
}

namespace {

// |pred & near(ref)| / |pred|, 1 when pred is empty
double matched_fraction(const Mask& pred, const Mask& ref_dilated) {
    std::size_t pred_count = 0, matched = 0;
    for (std::size_t i = 0; i < pred.pixels.size(); ++i) {
        if (!pred.pixels[i]) continue;
        ++pred_count;
        matched += ref_dilated.pixels[i];
    }
    if (pred_count == 0) return 1.0;
    return static_cast<double>(matched) / static_cast<double>(pred_count);
}

} // namespace

PixelScores relaxed_scores(const Mask& pred, const Mask& gt, const RelaxedParams& params) {
    if (pred.height != gt.height || pred.width != gt.width)
        throw std::invalid_argument("relaxed_scores: mask shapes differ");
    PixelScores s;
    s.correctness = matched_fraction(pred, dilate_disk(gt, params.rho));
    s.completeness = matched_fraction(gt, dilate_disk(pred, params.rho));
    return s;
}

double f_measure(double correctness, double completeness) {
    const double sum = correctness + completeness;
    if (sum <= 0.0) return 0.0;
    return 2.0 * correctness * completeness / sum;
}

Mask binarize(const FloatMap& map, double threshold) {
    Mask out(map.valid_h, map.valid_w);
    for (int y = 0; y < map.valid_h; ++y)
        for (int x = 0; x < map.valid_w; ++x)
            out.at(y, x) =
                static_cast<double>(map.at(map.valid_y0 + y, map.valid_x0 + x)) >= threshold ? 1 : 0;
    return out;
}

std::vector<ScoreRow> sweep(const FloatMap& prob, const Mask& gt, const std::vector<double>& thresholds,
                            const RelaxedParams& params) {
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (thresholds[i] <= thresholds[i - 1])
            throw std::invalid_argument("sweep: thresholds must be sorted ascending");
    const Mask gt_crop = prob.crop_like_valid(gt);
    std::vector<ScoreRow> rows;
    rows.reserve(thresholds.size());
    for (double t : thresholds) {
        const Mask pred = binarize(prob, t);
        const PixelScores s = relaxed_scores(pred, gt_crop, params);
        rows.push_back({t, s.correctness, s.completeness, f_measure(s.correctness, s.completeness)});
    }
    return rows;
}

std::vector<double> threshold_grid(double step) {
    if (step <= 0.0 || step > 1.0) throw std::invalid_argument("threshold_grid: bad step");
    std::vector<double> grid;
    const int n = static_cast<int>(std::llround(1.0 / step));
    for (int i = 1; i <= n; ++i) {
        const double t = step * i;
        if (t > 1.0 + 1e-12) break;
        grid.push_back(t > 1.0 ? 1.0 : t);
    }
    return grid;
}

double mean_f(const std::vector<std::pair<const FloatMap*, const Mask*>>& maps, double threshold,
              const RelaxedParams& params) {
    if (maps.empty()) throw std::invalid_argument("mean_f: empty image list");
    double sum = 0.0, comp = 0.0;
    for (const auto& [prob, gt] : maps) {
        const Mask pred = binarize(*prob, threshold);
        const Mask gt_crop = prob->crop_like_valid(*gt);
        const PixelScores s = relaxed_scores(pred, gt_crop, params);
        const double f = f_measure(s.correctness, s.completeness);
        const double y = f - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(maps.size());
}

double pooled_f(const std::vector<std::pair<const FloatMap*, const Mask*>>& maps, double threshold,
                const RelaxedParams& params) {
    if (maps.empty()) throw std::invalid_argument("pooled_f: empty image list");
    std::size_t pred_total = 0, pred_matched = 0, gt_total = 0, gt_matched = 0;
    for (const auto& [prob, gt] : maps) {
        const Mask pred = binarize(*prob, threshold);
        const Mask gt_crop = prob->crop_like_valid(*gt);
        const Mask gt_dil = dilate_disk(gt_crop, params.rho);
        const Mask pred_dil = dilate_disk(pred, params.rho);
        for (std::size_t i = 0; i < pred.pixels.size(); ++i) {
            if (pred.pixels[i]) {
                ++pred_total;
                pred_matched += gt_dil.pixels[i];
            }
            if (gt_crop.pixels[i]) {
                ++gt_total;
                gt_matched += pred_dil.pixels[i];
            }
        }
    }
    const double corr = pred_total == 0 ? 1.0 : static_cast<double>(pred_matched) / pred_total;
    const double comp = gt_total == 0 ? 1.0 : static_cast<double>(gt_matched) / gt_total;
    return f_measure(corr, comp);
}

std::string scores_csv(const std::vector<ScoreRow>& rows) {
    std::string out = "threshold,correctness,completeness,f_measure\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f\n", r.threshold, r.correctness,
                      r.completeness, r.f_measure);
        out += buf;
    }
    return out;
}

Mask boundary_pixels(const Mask& mask) {
    Mask out(mask.height, mask.width);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(y, x)) continue;
            const bool edge = y == 0 || y == mask.height - 1 || x == 0 || x == mask.width - 1 ||
                              !mask.at(y - 1, x) || !mask.at(y + 1, x) || !mask.at(y, x - 1) ||
                              !mask.at(y, x + 1);
            out.at(y, x) = edge ? 1 : 0;
        }
    }
    return out;
}

double boundary_f_measure(const Mask& pred, const Mask& gt) {
    const PixelScores s = relaxed_scores(boundary_pixels(pred), boundary_pixels(gt), RelaxedParams{0});
    return f_measure(s.correctness, s.completeness);
}

} // namespace aeroseg::eval
