#include "aeroseg/postproc/morphology.hpp"

#include <stdexcept>

namespace aeroseg::postproc {

Mask erode(const Mask& mask, int radius) {
    if (radius < 0) throw std::invalid_argument("erode: radius must be nonnegative");
    if (radius == 0) return mask;
    Mask out(mask.height, mask.width);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(y, x)) continue;
            bool keep = y - radius >= 0 && y + radius < mask.height && x - radius >= 0 &&
                        x + radius < mask.width;
            for (int dy = -radius; keep && dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx)
                    if (!mask.at(y + dy, x + dx)) {
                        keep = false;
                        break;
                    }
            out.at(y, x) = keep ? 1 : 0;
        }
    }
    return out;
}

} // namespace aeroseg::postproc
