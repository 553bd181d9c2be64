#pragma once
#include <type_traits>

#include "aeroseg/arch/profile.hpp"
#include "aeroseg/nn/network.hpp"

namespace aeroseg::arch {

// L-Seg: local pathway only, [B,3,wl,wl] -> [B,output^2] probabilities.
template <typename T>
nn::Network<T> build_lseg(const Profile& profile);

// G-Seg: global pathway only, [B,3,wg,wg] -> [B,output^2].
template <typename T>
nn::Network<T> build_gseg(const Profile& profile);

// RA-Seg: global architecture with a single sigmoid output per patch.
template <typename T>
nn::Network<T> build_ra(const Profile& profile);

// LG-Seg: both stems (heads dropped), concatenated, three fully-connected
// layers, final output^2 sigmoids.
template <typename T>
nn::Network<T> build_lgseg(const Profile& profile);

template <typename T>
nn::Network<T> build_by_name(const std::string& arch, const Profile& profile);

// Dispatch on mode; unused inputs may be null and are ignored entirely.
template <typename T>
Tensor<T> forward_dual(const nn::Network<T>& net, std::type_identity_t<const Tensor<T>*> local,
                       std::type_identity_t<const Tensor<T>*> global);

// (receptive field, step, offset of the first unit's field) of the last stem
// layer, per axis, plus the union coverage over all spatial positions.
struct ReceptiveField {
    int size = 1;
    int jump = 1;
    int min_start = 0;  // first input row touched by unit 0 (can be < 0 with padding)
    int max_end = 0;    // one past the last input row touched by the last unit
};
ReceptiveField stem_receptive_field(const std::vector<StemLayerDef>& stem, int input_extent);

} // namespace aeroseg::arch
