#pragma once

#include "aeroseg/data/patches.hpp"
#include "aeroseg/nn/network.hpp"

namespace aeroseg::experiments {

enum class BlankPathway { None, Local, Global };
const char* blank_name(BlankPathway b);
BlankPathway blank_from_name(const std::string& name);

// Full-image inference on the 16-stride tile grid. Patch outputs land
// disjointly in their tiles; the excluded border is no-data. RA networks
// write their single patch value across the whole tile. Throws when the
// image has no interior tiles.
data::FloatMap predict_image(const nn::Network<float>& net, const data::Scene& scene, int batch = 16);

// Same, but one pathway receives a blank patch: the per-channel mean of the
// whole scene image. BlankPathway::None is exactly predict_image.
data::FloatMap predict_with_blank(const nn::Network<float>& net, const data::Scene& scene,
                                  BlankPathway blank, int batch = 16);

} // namespace aeroseg::experiments
