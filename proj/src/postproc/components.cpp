#include "aeroseg/postproc/components.hpp"

#include <algorithm>

namespace aeroseg::postproc {

std::vector<Blob> components(const Mask& mask, std::size_t min_area) {
    std::vector<std::int32_t> label(mask.pixels.size(), 0);
    std::vector<Blob> blobs;
    std::vector<std::pair<int, int>> stack;
    int next_id = 0;
    for (int sy = 0; sy < mask.height; ++sy) {
        for (int sx = 0; sx < mask.width; ++sx) {
            const std::size_t start = static_cast<std::size_t>(sy) * mask.width + sx;
            if (!mask.pixels[start] || label[start]) continue;
            Blob blob;
            blob.id = ++next_id;
            blob.box_y0 = blob.box_y1 = sy;
            blob.box_x0 = blob.box_x1 = sx;
            label[start] = next_id;
            stack.clear();
            stack.emplace_back(sy, sx);
            while (!stack.empty()) {
                const auto [y, x] = stack.back();
                stack.pop_back();
                blob.pixels.emplace_back(y, x);
                blob.box_y0 = std::min(blob.box_y0, y);
                blob.box_x0 = std::min(blob.box_x0, x);
                blob.box_y1 = std::max(blob.box_y1, y);
                blob.box_x1 = std::max(blob.box_x1, x);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dy == 0 && dx == 0) continue;
                        const int yy = y + dy, xx = x + dx;
                        if (yy < 0 || yy >= mask.height || xx < 0 || xx >= mask.width) continue;
                        const std::size_t idx = static_cast<std::size_t>(yy) * mask.width + xx;
                        if (!mask.pixels[idx] || label[idx]) continue;
                        label[idx] = next_id;
                        stack.emplace_back(yy, xx);
                    }
                }
            }
            blob.area = blob.pixels.size();
            blob.box_y1 += 1;
            blob.box_x1 += 1;
            if (blob.area >= min_area) blobs.push_back(std::move(blob));
        }
    }
    return blobs;
}

} // namespace aeroseg::postproc
