#pragma once

#include <string>

#include "aeroseg/data/image.hpp"

namespace aeroseg::data {

// Lossless probability map: "AEROMAP1" | u32 height | u32 width |
// u32 valid_y0 | u32 valid_x0 | u32 valid_h | u32 valid_w | f32 pixels,
// little-endian, row-major. Thresholding for metrics always reads this
// format, never the quantized PGM.
void save_rawmap(const std::string& path, const FloatMap& map);
FloatMap load_rawmap(const std::string& path);

} // namespace aeroseg::data
