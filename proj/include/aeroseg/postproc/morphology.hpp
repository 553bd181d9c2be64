#pragma once

#include "aeroseg/data/image.hpp"

namespace aeroseg::postproc {

using data::Mask;

// Binary erosion with a (2r+1)x(2r+1) square structuring element; pixels
// whose window leaves the image erode away. r = 0 is the identity.
Mask erode(const Mask& mask, int radius);

} // namespace aeroseg::postproc
