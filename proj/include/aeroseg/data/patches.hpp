#pragma once

#include <vector>

#include "aeroseg/data/scene.hpp"
#include "aeroseg/tensor.hpp"
#include "aeroseg/util/rng.hpp"

namespace aeroseg::data {

inline constexpr int kLocalWidth = 64;
inline constexpr int kGlobalWidth = 256;
inline constexpr int kLabelWidth = 16;
// tiles must keep the global window inside the scene: 256/2 - 16/2
inline constexpr int kGridBorder = 120;

struct PatchCenter {
    int y = 0, x = 0;
    bool positive = false; // >=1 positive pixel in the 16x16 label window
};

// Co-centered (local, global, label) patches. local/global are [3,w,w]
// planar in [0,1]; label is row-major 16x16 in {0,1}.
struct PatchTriple {
    Tensor<float> local;  // [3,64,64]
    Tensor<float> global; // [3,256,256]
    Tensor<float> label;  // [256]
    PatchCenter center;
};

// W(X, p, w): rows [y - w/2, y + w/2), same for columns.
Tensor<float> extract_image_window(const ImageF& image, int y, int x, int w);
Tensor<float> extract_label_window(const Mask& mask, int y, int x, int w);
PatchTriple extract_triple(const Scene& scene, int y, int x);

// true iff the 256x256 global window fits inside the scene
bool center_fits(const Scene& scene, int y, int x);

// Quota sampling: exactly round(n * positive_fraction) positive centers, the
// rest negative. Throws when a quota cannot be filled within bounded draws.
std::vector<PatchCenter> sample_centers(const Scene& scene, int n, double positive_fraction, Rng& rng);

// Materialized form of sample_centers; prefer sample_centers + extract_triple
// when holding many patches at once.
std::vector<PatchTriple> sample_triples(const Scene& scene, int n, double positive_fraction, Rng& rng);

struct GridPlan {
    std::vector<PatchCenter> centers; // tile centers, row-major order
    int border = kGridBorder;         // excluded frame width
    int tiles_y = 0, tiles_x = 0;
};

// 16-stride grid of disjoint 16x16 output tiles covering the interior
// [border, border + 16*tiles). Tile (ty,tx) has center
// (border + 16*ty + 8, border + 16*tx + 8).
GridPlan grid_centers(int height, int width);
GridPlan grid_centers(const Scene& scene);

// Batch assembly: stacks [3,w,w] patches into [B,3,w,w] network inputs.
Tensor<float> stack_local(const Scene& scene, const std::vector<PatchCenter>& centers,
                          std::size_t begin, std::size_t count);
Tensor<float> stack_global(const Scene& scene, const std::vector<PatchCenter>& centers,
                           std::size_t begin, std::size_t count);
Tensor<float> stack_labels(const Scene& scene, const std::vector<PatchCenter>& centers,
                           std::size_t begin, std::size_t count);

} // namespace aeroseg::data
