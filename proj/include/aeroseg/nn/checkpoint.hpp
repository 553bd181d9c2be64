#pragma once

#include <string>

#include "aeroseg/nn/network.hpp"

namespace aeroseg::nn {

// Checkpoint layout, all integers little-endian:
//   "AEROSEG1" | u32 tensor count | per tensor:
//   u32 name length | name bytes | u32 rank | u32 extents[rank] | f32 values
// Values are 32-bit regardless of the network's working precision.
void save_checkpoint(const std::string& path, Network<float>& net);
void load_checkpoint(const std::string& path, Network<float>& net);

} // namespace aeroseg::nn
