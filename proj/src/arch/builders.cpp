#include "aeroseg/arch/builders.hpp"

#include <stdexcept>

namespace aeroseg::arch {

using nn::LayerKind;
using nn::LayerSpec;
using nn::LayerState;
using nn::NetMode;
using nn::Network;

namespace {

std::vector<LayerSpec> stem_specs(const std::vector<StemLayerDef>& defs, int in_ch) {
    std::vector<LayerSpec> specs;
    int ch = in_ch;
    for (const auto& def : defs) {
        if (def.is_pool) {
            specs.push_back(LayerSpec::maxpool(def.name));
        } else {
            specs.push_back(LayerSpec::conv(def.name, ch, def.filters, def.kernel, def.stride, def.pad));
            specs.push_back(LayerSpec::relu(def.name + "_relu"));
            ch = def.filters;
        }
    }
    return specs;
}

template <typename T>
std::vector<LayerState<T>> wrap_states(std::vector<LayerSpec> specs) {
    std::vector<LayerState<T>> out(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) out[i].spec = std::move(specs[i]);
    return out;
}

// stem -> flattened width, with spatial arithmetic validated
template <typename T>
std::size_t build_stem(const std::vector<StemLayerDef>& defs, int input_extent,
                       std::vector<LayerState<T>>& out) {
    std::vector<LayerSpec> specs = stem_specs(defs, 3);
    auto shapes = nn::propagate_stem_shapes(specs, 3, input_extent, input_extent);
    out = wrap_states<T>(std::move(specs));
    const auto& last = shapes.back();
    return last[0] * last[1] * last[2];
}

// hidden widths + final width, relu between, sigmoid after the last fc
template <typename T>
std::vector<LayerState<T>> build_head(std::size_t in_width, const std::vector<int>& widths) {
    std::vector<LayerSpec> specs;
    int fan_in = static_cast<int>(in_width);
    for (std::size_t i = 0; i < widths.size(); ++i) {
        const std::string name = "fc" + std::to_string(i + 1);
        specs.push_back(LayerSpec::fully_connected(name, fan_in, widths[i]));
        if (i + 1 < widths.size())
            specs.push_back(LayerSpec::relu(name + "_relu"));
        else
            specs.push_back(LayerSpec::sigmoid("out"));
        fan_in = widths[i];
    }
    return wrap_states<T>(std::move(specs));
}

} // namespace

template <typename T>
Network<T> build_lseg(const Profile& profile) {
    profile.validate();
    Network<T> net;
    net.mode = NetMode::LocalOnly;
    net.profile_name = profile.name;
    net.local_feat = build_stem(profile.local_stem, profile.local_input, net.local_stem);
    net.output_width = static_cast<std::size_t>(profile.output) * profile.output;
    net.head = build_head<T>(net.local_feat,
                             {profile.head_local_hidden, static_cast<int>(net.output_width)});
    return net;
}

template <typename T>
Network<T> build_gseg(const Profile& profile) {
    profile.validate();
    Network<T> net;
    net.mode = NetMode::GlobalOnly;
    net.profile_name = profile.name;
    net.global_feat = build_stem(profile.global_stem, profile.global_input, net.global_stem);
    net.output_width = static_cast<std::size_t>(profile.output) * profile.output;
    net.head = build_head<T>(net.global_feat,
                             {profile.head_global_hidden, static_cast<int>(net.output_width)});
    return net;
}

template <typename T>
Network<T> build_ra(const Profile& profile) {
    profile.validate();
    Network<T> net;
    net.mode = NetMode::RaClassifier;
    net.profile_name = profile.name;
    net.global_feat = build_stem(profile.global_stem, profile.global_input, net.global_stem);
    net.output_width = 1;
    net.head = build_head<T>(net.global_feat, {profile.head_global_hidden, 1});
    return net;
}

template <typename T>
Network<T> build_lgseg(const Profile& profile) {
    profile.validate();
    Network<T> net;
    net.mode = NetMode::Dual;
    net.profile_name = profile.name;
    net.local_feat = build_stem(profile.local_stem, profile.local_input, net.local_stem);
    net.global_feat = build_stem(profile.global_stem, profile.global_input, net.global_stem);
    net.output_width = static_cast<std::size_t>(profile.output) * profile.output;
    net.head = build_head<T>(net.local_feat + net.global_feat,
                             {profile.head_fusion_h1, profile.head_fusion_h2,
                              static_cast<int>(net.output_width)});
    return net;
}

template <typename T>
Network<T> build_by_name(const std::string& arch, const Profile& profile) {
    if (arch == "lseg") return build_lseg<T>(profile);
    if (arch == "gseg") return build_gseg<T>(profile);
    if (arch == "ra") return build_ra<T>(profile);
    if (arch == "lgseg") return build_lgseg<T>(profile);
    throw std::invalid_argument("unknown architecture: " + arch + " (expected lseg|gseg|ra|lgseg)");
}

template <typename T>
Tensor<T> forward_dual(const Network<T>& net, std::type_identity_t<const Tensor<T>*> local,
                       std::type_identity_t<const Tensor<T>*> global) {
    if (net.mode == NetMode::Dual && local && global && local->dim(0) != global->dim(0))
        throw std::invalid_argument("forward_dual: local/global batch extents differ");
    return net.forward(net.uses_local() ? local : nullptr, net.uses_global() ? global : nullptr);
}

ReceptiveField stem_receptive_field(const std::vector<StemLayerDef>& stem, int input_extent) {
    int rf = 1, jump = 1, start = 0;
    int extent = input_extent;
    for (const auto& l : stem) {
        const int k = l.kernel, s = l.stride, p = l.is_pool ? 0 : l.pad;
        rf += (k - 1) * jump;
        start -= p * jump;
        jump *= s;
        extent = (extent + 2 * p - k) / s + 1;
    }
    ReceptiveField out;
    out.size = rf;
    out.jump = jump;
    out.min_start = start;
    out.max_end = start + (extent - 1) * jump + rf;
    return out;
}

#define AEROSEG_INSTANTIATE(T)                                                   \
    template Network<T> build_lseg<T>(const Profile&);                          \
    template Network<T> build_gseg<T>(const Profile&);                          \
    template Network<T> build_ra<T>(const Profile&);                            \
    template Network<T> build_lgseg<T>(const Profile&);                         \
    template Network<T> build_by_name<T>(const std::string&, const Profile&);   \
    template Tensor<T> forward_dual<T>(const Network<T>&, std::type_identity_t<const Tensor<T>*>, std::type_identity_t<const Tensor<T>*>);

AEROSEG_INSTANTIATE(float)
AEROSEG_INSTANTIATE(double)
#undef AEROSEG_INSTANTIATE

} // namespace aeroseg::arch
