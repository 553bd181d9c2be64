#pragma once

#include <string>
#include <vector>

#include "aeroseg/data/image.hpp"

namespace aeroseg::eval {

using data::FloatMap;
using data::Mask;

// Euclidean-disk relaxation: a pixel counts as matched when some reference
// positive lies within rho pixels (offsets with dy^2+dx^2 <= rho^2).
struct RelaxedParams {
    int rho = 3;
};

struct PixelScores {
    double correctness = 1.0;  // fraction of predicted positives near ground truth
    double completeness = 1.0; // fraction of ground-truth positives near predictions
};

// Empty-denominator conventions: correctness = 1 with no predicted positives,
// completeness = 1 with no ground-truth positives.
PixelScores relaxed_scores(const Mask& pred, const Mask& gt, const RelaxedParams& params);

// reference dilated by the rho-disk (building block of relaxed_scores)
Mask dilate_disk(const Mask& mask, int rho);

double f_measure(double correctness, double completeness);

struct ScoreRow {
    double threshold = 0;
    double correctness = 0;
    double completeness = 0;
    double f_measure = 0;
};

// binarize at >= threshold within the map's valid region
Mask binarize(const FloatMap& map, double threshold);

// thresholds must be ascending; gt is cropped to the map's valid region
std::vector<ScoreRow> sweep(const FloatMap& prob, const Mask& gt, const std::vector<double>& thresholds,
                            const RelaxedParams& params);

// {step, 2*step, ..., <= 1} — e.g. step 0.01 gives the 0.01:0.01:1 grid
std::vector<double> threshold_grid(double step);

// Unweighted mean of the per-image F at one threshold.
double mean_f(const std::vector<std::pair<const FloatMap*, const Mask*>>& maps, double threshold,
              const RelaxedParams& params);

// Pooled alternative: counts summed over images before the ratio.
double pooled_f(const std::vector<std::pair<const FloatMap*, const Mask*>>& maps, double threshold,
                const RelaxedParams& params);

// "threshold,correctness,completeness,f_measure", 6 decimal places
std::string scores_csv(const std::vector<ScoreRow>& rows);

// boundary pixels: positives with a 4-neighbor background (image border
// counts as background)
Mask boundary_pixels(const Mask& mask);

// exact-match F between the two boundaries; the sharpness measure used by
// the complementarity experiment
double boundary_f_measure(const Mask& pred, const Mask& gt);

} // namespace aeroseg::eval
