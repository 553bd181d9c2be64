#include "aeroseg/postproc/counting.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace aeroseg::postproc {

double box_iou(const Box& a, const Box& b) {
    const int iy0 = std::max(a.y0, b.y0), ix0 = std::max(a.x0, b.x0);
    const int iy1 = std::min(a.y1, b.y1), ix1 = std::min(a.x1, b.x1);
    if (iy1 <= iy0 || ix1 <= ix0) return 0.0;
    const double inter = static_cast<double>(iy1 - iy0) * (ix1 - ix0);
    const double area_a = static_cast<double>(a.y1 - a.y0) * (a.x1 - a.x0);
    const double area_b = static_cast<double>(b.y1 - b.y0) * (b.x1 - b.x0);
    return inter / (area_a + area_b - inter);
}

double select_threshold(const std::vector<std::pair<const FloatMap*, const data::Mask*>>& val_set,
                        const eval::RelaxedParams& params) {
    if (val_set.empty()) throw std::invalid_argument("select_threshold: empty validation set");
    const std::vector<double> grid = eval::threshold_grid(0.01);
    double sum = 0.0;
    for (const auto& [prob, gt] : val_set) {
        const auto rows = eval::sweep(*prob, *gt, grid, params);
        double best_f = -1.0, best_t = grid.front();
        for (const auto& r : rows) {
            if (r.f_measure > best_f) { // strict: ties keep the lower threshold
                best_f = r.f_measure;
                best_t = r.threshold;
            }
        }
        sum += best_t;
    }
    return sum / static_cast<double>(val_set.size());
}

CountReport count_report(const std::vector<Blob>& blobs, const std::vector<Box>& reference_boxes,
                         const CountingOptions& options) {
    struct Pair {
        double iou;
        std::size_t blob, ref;
    };
    std::vector<Pair> pairs;
    for (std::size_t bi = 0; bi < blobs.size(); ++bi) {
        const Box bb{blobs[bi].box_y0, blobs[bi].box_x0, blobs[bi].box_y1, blobs[bi].box_x1};
        for (std::size_t ri = 0; ri < reference_boxes.size(); ++ri) {
            const double iou = box_iou(bb, reference_boxes[ri]);
            if (iou >= options.iou_threshold) pairs.push_back({iou, bi, ri});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (a.blob != b.blob) return a.blob < b.blob;
        return a.ref < b.ref;
    });

    std::vector<std::size_t> refs_per_blob(blobs.size(), 0);
    std::vector<bool> ref_taken(reference_boxes.size(), false);
    for (const auto& p : pairs) {
        if (ref_taken[p.ref]) continue;
        ref_taken[p.ref] = true;
        ++refs_per_blob[p.blob];
    }

    CountReport r;
    r.human_count = reference_boxes.size();
    r.detected_count = blobs.size();
    for (std::size_t bi = 0; bi < blobs.size(); ++bi) {
        if (refs_per_blob[bi] == 0)
            ++r.false_positives;
        else if (refs_per_blob[bi] == 1)
            ++r.true_positives;
        else
            ++r.residential_hits;
    }
    for (bool taken : ref_taken)
        if (!taken) ++r.false_negatives;

    const double credit = static_cast<double>(r.true_positives) +
                          static_cast<double>(options.residential_credit) * r.residential_hits;
    const double p_denom = credit + static_cast<double>(r.false_positives);
    const double r_denom = credit + static_cast<double>(r.false_negatives);
    r.precision = p_denom > 0 ? credit / p_denom : 1.0;
    r.recall = r_denom > 0 ? credit / r_denom : 1.0;
    r.f1 = eval::f_measure(r.precision, r.recall);
    return r;
}

std::string count_report_csv(const CountReport& r, const CountingOptions& options) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "# credit C = TP + %d*residential; precision = C/(C+FP); recall = C/(C+FN)\n"
                  "# blob matches a reference box at IoU >= %.2f; greedy highest-IoU-first assignment\n"
                  "human_count,detected_count,true_positives,false_positives,false_negatives,"
                  "residential_hits,precision,recall,f1\n"
                  "%zu,%zu,%zu,%zu,%zu,%zu,%.6f,%.6f,%.6f\n",
                  options.residential_credit, options.iou_threshold, r.human_count, r.detected_count,
                  r.true_positives, r.false_positives, r.false_negatives, r.residential_hits,
                  r.precision, r.recall, r.f1);
    return buf;
}

namespace {

void burn_box(data::ImageF& img, const Box& b, float red, float green, float blue) {
    const int y0 = std::clamp(b.y0, 0, img.height - 1);
    const int y1 = std::clamp(b.y1 - 1, 0, img.height - 1);
    const int x0 = std::clamp(b.x0, 0, img.width - 1);
    const int x1 = std::clamp(b.x1 - 1, 0, img.width - 1);
    for (int x = x0; x <= x1; ++x) {
        for (int y : {y0, y1}) {
            img.at(0, y, x) = red;
            img.at(1, y, x) = green;
            img.at(2, y, x) = blue;
        }
    }
    for (int y = y0; y <= y1; ++y) {
        for (int x : {x0, x1}) {
            img.at(0, y, x) = red;
            img.at(1, y, x) = green;
            img.at(2, y, x) = blue;
        }
    }
}

} // namespace

data::ImageF overlay_boxes(const data::ImageF& image, const std::vector<Blob>& blobs,
                           const std::vector<Box>& reference_boxes, int offset_y, int offset_x) {
    data::ImageF out = image;
    for (const auto& ref : reference_boxes) {
        Box b{ref.y0 + offset_y, ref.x0 + offset_x, ref.y1 + offset_y, ref.x1 + offset_x};
        burn_box(out, b, 0.0f, 1.0f, 0.0f);
    }
    for (const auto& blob : blobs) {
        Box b{blob.box_y0 + offset_y, blob.box_x0 + offset_x, blob.box_y1 + offset_y,
              blob.box_x1 + offset_x};
        burn_box(out, b, 1.0f, 0.0f, 0.0f);
    }
    return out;
}

} // namespace aeroseg::postproc
