#pragma once

#include <string>

#include "aeroseg/data/image.hpp"

namespace aeroseg::data {

// Binary PPM (P6) / PGM (P5), maxval 255. Round trips are bit-exact.
// Malformed headers throw with the byte offset of the failure.

void save_ppm(const std::string& path, const ImageF& image);
ImageF load_ppm(const std::string& path);

// mask <-> {0,255}
void save_pgm_mask(const std::string& path, const Mask& mask);
Mask load_pgm_mask(const std::string& path);

// probabilities quantized round-half-up to bytes; no-data pixels write 0
void save_pgm_map(const std::string& path, const FloatMap& map);

std::uint8_t quantize_byte(float v); // floor(v*255 + 0.5), clamped

} // namespace aeroseg::data
