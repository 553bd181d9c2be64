#pragma once

#include <string>
#include <vector>

#include "aeroseg/eval/metrics.hpp"
#include "aeroseg/experiments/predict.hpp"

namespace aeroseg::experiments {

// Pathway-contribution measurements at a common reference threshold (the
// best mean-F threshold of the unblanked model on the same scenes).
struct AblationScores {
    double mean_f = 0;        // at the reference threshold
    double decoy_fp_rate = 0; // predicted-positive fraction of decoy pixels
    double boundary_f = 0;    // mean exact-match boundary F
};

struct AblationReport {
    double threshold = 0;
    AblationScores none;
    AblationScores local_blanked;  // blank fed to the local pathway
    AblationScores global_blanked; // blank fed to the global pathway
};

AblationReport run_ablation(const nn::Network<float>& net, const std::vector<data::Scene>& scenes,
                            const eval::RelaxedParams& params, double grid_step = 0.05);

std::string ablation_csv(const AblationReport& report);

} // namespace aeroseg::experiments
