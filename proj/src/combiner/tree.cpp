#include "aeroseg/combiner/tree.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace aeroseg::combiner {

Mask apply_tree(const TreeInputs& inputs, const ThresholdTriplet& triplet) {
    const FloatMap& ra = *inputs.ra;
    const FloatMap& ls = *inputs.lseg;
    if (ra.valid_h != ls.valid_h || ra.valid_w != ls.valid_w)
        throw std::invalid_argument("apply_tree: RA and L-Seg valid regions differ");
    Mask out(ls.valid_h, ls.valid_w);
    for (int y = 0; y < ls.valid_h; ++y) {
        for (int x = 0; x < ls.valid_w; ++x) {
            const bool residential =
                static_cast<double>(ra.at(ra.valid_y0 + y, ra.valid_x0 + x)) >= triplet.l1;
            const double p = ls.at(ls.valid_y0 + y, ls.valid_x0 + x);
            out.at(y, x) = p >= (residential ? triplet.l2 : triplet.l3) ? 1 : 0;
        }
    }
    return out;
}

double tree_mean_f(const std::vector<TreeInputs>& dataset, const ThresholdTriplet& triplet,
                   const eval::RelaxedParams& params) {
    if (dataset.empty()) throw std::invalid_argument("tree_mean_f: empty dataset");
    double sum = 0.0;
    for (const auto& in : dataset) {
        const Mask pred = apply_tree(in, triplet);
        const Mask gt = in.lseg->crop_like_valid(*in.gt);
        const auto s = eval::relaxed_scores(pred, gt, params);
        sum += eval::f_measure(s.correctness, s.completeness);
    }
    return sum / static_cast<double>(dataset.size());
}

namespace {

double& coord(ThresholdTriplet& t, char which) {
    switch (which) {
        case '1': return t.l1;
        case '2': return t.l2;
        case '3': return t.l3;
    }
    throw std::logic_error("bad coordinate");
}

// One sweep of a single coordinate over the grid; moves only on strict
// improvement, first grid value wins ties among improvements.
bool sweep_coordinate(const std::vector<TreeInputs>& dataset, const std::vector<double>& grid,
                      const eval::RelaxedParams& params, ThresholdTriplet& t, char which,
                      double& current_f) {
    double best_f = current_f;
    double best_v = coord(t, which);
    bool moved = false;
    for (double v : grid) {
        ThresholdTriplet cand = t;
        coord(cand, which) = v;
        const double f = tree_mean_f(dataset, cand, params);
        if (f > best_f) {
            best_f = f;
            best_v = v;
            moved = true;
        }
    }
    if (moved) {
        coord(t, which) = best_v;
        current_f = best_f;
    }
    return moved;
}

std::vector<double> with_midpoints(const std::vector<double>& grid) {
    std::vector<double> out;
    out.reserve(grid.size() * 2);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.push_back(grid[i]);
        if (i + 1 < grid.size()) out.push_back(0.5 * (grid[i] + grid[i + 1]));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

OptimizeResult optimize_triplet(const std::vector<TreeInputs>& dataset, const std::vector<double>& grid,
                                double init_l1, double init_l2, const eval::RelaxedParams& params,
                                const OptimizeOptions& options) {
    if (dataset.empty()) throw std::invalid_argument("optimize_triplet: empty dataset");
    if (grid.empty()) throw std::invalid_argument("optimize_triplet: empty grid");

    OptimizeResult result;
    // L3 starts at the L-Seg standalone threshold, so the starting tree is
    // exactly single-threshold L-Seg and the trace can only improve on it.
    result.triplet = {init_l1, init_l2, init_l2};
    result.mean_f = tree_mean_f(dataset, result.triplet, params);

    static const char kOrder[6] = {'3', '1', '2', '3', '2', '1'};
    int step = 0;
    std::size_t cursor = 0;
    int since_improvement = 0; // distinct coordinates swept without a move
    bool swept_clean[3] = {false, false, false};

    while (true) {
        const char which = kOrder[cursor % 6];
        ++cursor;
        const bool moved = sweep_coordinate(dataset, grid, params, result.triplet, which, result.mean_f);
        ++step;
        result.trace.push_back({step, which, result.triplet, result.mean_f});
        if (moved) {
            since_improvement = 0;
            swept_clean[0] = swept_clean[1] = swept_clean[2] = false;
        } else {
            swept_clean[which - '1'] = true;
            since_improvement = swept_clean[0] + swept_clean[1] + swept_clean[2];
            if (since_improvement == 3) break;
        }
    }

    if (options.half_step_refine) {
        const std::vector<double> fine = with_midpoints(grid);
        for (char which : {'3', '1', '2'}) {
            const bool moved =
                sweep_coordinate(dataset, fine, params, result.triplet, which, result.mean_f);
            ++step;
            result.trace.push_back({step, which, result.triplet, result.mean_f});
            (void)moved;
        }
    }
    return result;
}

StandaloneBest standalone_best_threshold(
    const std::vector<std::pair<const FloatMap*, const Mask*>>& maps, const std::vector<double>& grid,
    const eval::RelaxedParams& params) {
    if (maps.empty()) throw std::invalid_argument("standalone_best_threshold: empty image list");
    StandaloneBest best;
    best.mean_f = -1.0;
    for (double t : grid) {
        const double f = eval::mean_f(maps, t, params);
        if (f > best.mean_f) {
            best.mean_f = f;
            best.threshold = t;
        }
    }
    return best;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
    std::string out = "step,coordinate,L1,L2,L3,mean_f\n";
    char buf[160];
    for (const auto& r : trace) {
        std::snprintf(buf, sizeof(buf), "%d,L%c,%.6f,%.6f,%.6f,%.6f\n", r.step, r.coordinate,
                      r.triplet.l1, r.triplet.l2, r.triplet.l3, r.mean_f);
        out += buf;
    }
    return out;
}

FloatMap expand_patch_map(const FloatMap& patch_level, int tile, int full_h, int full_w, int border) {
    FloatMap out(full_h, full_w);
    out.valid_y0 = out.valid_x0 = border;
    out.valid_h = patch_level.height * tile;
    out.valid_w = patch_level.width * tile;
    for (auto& v : out.pixels) v = 0.0f;
    for (int ty = 0; ty < patch_level.height; ++ty)
        for (int tx = 0; tx < patch_level.width; ++tx)
            for (int y = 0; y < tile; ++y)
                for (int x = 0; x < tile; ++x)
                    out.at(border + ty * tile + y, border + tx * tile + x) = patch_level.at(ty, tx);
    return out;
}

} // namespace aeroseg::combiner
