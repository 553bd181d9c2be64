#pragma once

#include <string>
#include <vector>

#include "aeroseg/eval/metrics.hpp"
#include "aeroseg/postproc/components.hpp"

namespace aeroseg::postproc {

using data::FloatMap;

struct Box {
    int y0 = 0, x0 = 0, y1 = 0, x1 = 0; // y1/x1 exclusive
};

double box_iou(const Box& a, const Box& b);

// Mean over images of the per-image argmax-F threshold (grid 0.01..1.00);
// ties break toward the lower threshold.
double select_threshold(const std::vector<std::pair<const FloatMap*, const data::Mask*>>& val_set,
                        const eval::RelaxedParams& params);

struct CountReport {
    std::size_t human_count = 0;     // reference boxes
    std::size_t detected_count = 0;  // blobs (== TP + FP + residential_hits)
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
    std::size_t residential_hits = 0; // blobs covering >= 2 reference boxes
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

struct CountingOptions {
    double iou_threshold = 0.3;
    // houses credited per residential hit in the precision/recall arithmetic
    int residential_credit = 2;
};

// Greedy highest-IoU-first assignment of reference boxes to blobs (a
// reference matches at most one blob; a blob may absorb several references).
// With credit C = TP + residential_credit * residential_hits:
//   precision = C / (C + FP),  recall = C / (C + FN)
CountReport count_report(const std::vector<Blob>& blobs, const std::vector<Box>& reference_boxes,
                         const CountingOptions& options = {});

// CSV with the credit formula documented in the header comment lines.
std::string count_report_csv(const CountReport& report, const CountingOptions& options);

// detected boxes burned into a copy of the image (red frames), reference
// boxes in green
data::ImageF overlay_boxes(const data::ImageF& image, const std::vector<Blob>& blobs,
                           const std::vector<Box>& reference_boxes, int offset_y = 0, int offset_x = 0);

} // namespace aeroseg::postproc
