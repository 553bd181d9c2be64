#pragma once

#include <cstdint>
#include <vector>

#include "aeroseg/data/image.hpp"

namespace aeroseg::postproc {

using data::Mask;

struct Blob {
    int id = 0;
    std::vector<std::pair<int, int>> pixels; // (y, x)
    int box_y0 = 0, box_x0 = 0, box_y1 = 0, box_x1 = 0; // y1/x1 exclusive
    std::size_t area = 0;
};

inline constexpr std::size_t kDefaultMinArea = 4;

// 8-connected labeling; blobs smaller than min_area are dropped as noise.
std::vector<Blob> components(const Mask& mask, std::size_t min_area = kDefaultMinArea);

} // namespace aeroseg::postproc
