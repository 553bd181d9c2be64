#pragma once

#include <string>
#include <vector>

#include "aeroseg/eval/metrics.hpp"

namespace aeroseg::combiner {

using data::FloatMap;
using data::Mask;

// (L1, L2, L3): L1 gates the RA-Seg map into residential / non-residential
// regions; L2 thresholds L-Seg inside them, L3 outside.
struct ThresholdTriplet {
    double l1 = 0, l2 = 0, l3 = 0;
};

// Per-image maps, pixel-aligned after the RA patch labels have been expanded
// to pixels (nearest-neighbor over each tile footprint).
struct TreeInputs {
    const FloatMap* ra = nullptr;
    const FloatMap* lseg = nullptr;
    const Mask* gt = nullptr; // full scene mask; cropped to the maps' valid region
};

// residential R = {ra >= L1}; output = (lseg >= L2) on R, (lseg >= L3) off R
Mask apply_tree(const TreeInputs& inputs, const ThresholdTriplet& triplet);

// relaxed mean F of the tree output over the dataset
double tree_mean_f(const std::vector<TreeInputs>& dataset, const ThresholdTriplet& triplet,
                   const eval::RelaxedParams& params);

struct TraceRow {
    int step = 0;
    char coordinate = '?'; // '1', '2', '3'
    ThresholdTriplet triplet;
    double mean_f = 0;
};

struct OptimizeResult {
    ThresholdTriplet triplet;
    double mean_f = 0;
    std::vector<TraceRow> trace;
};

struct OptimizeOptions {
    // After convergence, one extra cyclic pass on the grid refined with
    // half-step midpoints.
    bool half_step_refine = false;
};

// Cyclic coordinate descent over the grid in sweep order L3, L1, L2, L3,
// L2, L1, ... starting from (init_l1, init_l2, L3 = init_l2). One coordinate
// sweeps the full grid per step; it moves only on a strict mean-F
// improvement, and the loop stops once every coordinate has been swept
// without improvement since the last move.
OptimizeResult optimize_triplet(const std::vector<TreeInputs>& dataset, const std::vector<double>& grid,
                                double init_l1, double init_l2, const eval::RelaxedParams& params,
                                const OptimizeOptions& options = {});

// Best standalone threshold by mean F (first grid value on ties); used to
// seed optimize_triplet per the tree's initialisation rule.
struct StandaloneBest {
    double threshold = 0;
    double mean_f = 0;
};
StandaloneBest standalone_best_threshold(
    const std::vector<std::pair<const FloatMap*, const Mask*>>& maps, const std::vector<double>& grid,
    const eval::RelaxedParams& params);

// "step,coordinate,L1,L2,L3,mean_f"
std::string trace_csv(const std::vector<TraceRow>& trace);

// patch-level RA value expanded over each 16x16 tile footprint
FloatMap expand_patch_map(const FloatMap& patch_level, int tile, int full_h, int full_w, int border);

} // namespace aeroseg::combiner
