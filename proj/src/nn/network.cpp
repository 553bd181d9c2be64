#include "aeroseg/nn/network.hpp"

#include <stdexcept>

#include "aeroseg/nn/init.hpp"
#include "aeroseg/nn/optim.hpp"

namespace aeroseg::nn {

const char* mode_name(NetMode m) {
    switch (m) {
        case NetMode::Dual: return "dual";
        case NetMode::LocalOnly: return "local-only";
        case NetMode::GlobalOnly: return "global-only";
        case NetMode::RaClassifier: return "ra-classifier";
    }
    return "?";
}

NetMode mode_from_name(const std::string& name) {
    if (name == "dual") return NetMode::Dual;
    if (name == "local-only") return NetMode::LocalOnly;
    if (name == "global-only") return NetMode::GlobalOnly;
    if (name == "ra-classifier") return NetMode::RaClassifier;
    throw std::invalid_argument("unknown network mode: " + name);
}

template <typename T>
void Gradients<T>::zero() {
    for (auto* section : {&local, &global, &head})
        for (auto& g : *section) {
            g.w.fill(T(0));
            g.b.fill(T(0));
        }
}

std::vector<std::vector<std::size_t>> propagate_stem_shapes(std::vector<LayerSpec>& stem, int in_ch,
                                                            int in_h, int in_w) {
    std::vector<std::vector<std::size_t>> shapes;
    int ch = in_ch, h = in_h, w = in_w;
    for (auto& spec : stem) {
        switch (spec.kind) {
            case LayerKind::Conv: {
                if (spec.in_ch != ch)
                    throw std::invalid_argument(spec.name + ": expects " + std::to_string(spec.in_ch) +
                                                " channels, stem carries " + std::to_string(ch));
                spec.in_h = h;
                spec.in_w = w;
                spec.out_h = conv_out_extent(h, spec.kh, spec.stride, spec.pad);
                spec.out_w = conv_out_extent(w, spec.kw, spec.stride, spec.pad);
                ch = spec.out_ch;
                h = spec.out_h;
                w = spec.out_w;
                break;
            }
            case LayerKind::MaxPool: {
                if (h % 2 != 0 || w % 2 != 0)
                    throw std::invalid_argument(spec.name + ": pool input " + std::to_string(h) + "x" +
                                                std::to_string(w) + " is not even");
                spec.in_ch = spec.out_ch = ch;
                spec.in_h = h;
                spec.in_w = w;
                spec.out_h = h / 2;
                spec.out_w = w / 2;
                h /= 2;
                w /= 2;
                break;
            }
            case LayerKind::Relu: {
                spec.in_ch = spec.out_ch = ch;
                spec.in_h = spec.out_h = h;
                spec.in_w = spec.out_w = w;
                break;
            }
            default:
                throw std::invalid_argument(spec.name + ": layer kind not allowed in a stem");
        }
        shapes.push_back({static_cast<std::size_t>(ch), static_cast<std::size_t>(h),
                          static_cast<std::size_t>(w)});
    }
    return shapes;
}

template <typename T>
void Network<T>::init_params(Rng& rng) {
    for (auto* section : {&local_stem, &global_stem, &head}) {
        for (auto& layer : *section) {
            if (!layer.spec.has_params()) continue;
            std::vector<std::size_t> wshape;
            std::size_t bsize = 0;
            if (layer.spec.kind == LayerKind::Conv) {
                wshape = {static_cast<std::size_t>(layer.spec.out_ch),
                          static_cast<std::size_t>(layer.spec.in_ch),
                          static_cast<std::size_t>(layer.spec.kh),
                          static_cast<std::size_t>(layer.spec.kw)};
                bsize = static_cast<std::size_t>(layer.spec.out_ch);
            } else {
                wshape = {static_cast<std::size_t>(layer.spec.fan_out),
                          static_cast<std::size_t>(layer.spec.fan_in)};
                bsize = static_cast<std::size_t>(layer.spec.fan_out);
            }
            layer.w = xavier_init<T>(wshape, rng);
            layer.b = Tensor<T>({bsize});
            layer.vw = Tensor<T>(wshape);
            layer.vb = Tensor<T>({bsize});
        }
    }
}

template <typename T>
std::size_t Network<T>::parameter_count() const {
    std::size_t n = 0;
    for (const auto* section : {&local_stem, &global_stem, &head}) {
        for (const auto& layer : *section) {
            const auto& s = layer.spec;
            if (s.kind == LayerKind::Conv)
                n += static_cast<std::size_t>(s.out_ch) * s.in_ch * s.kh * s.kw + s.out_ch;
            else if (s.kind == LayerKind::FullyConnected)
                n += static_cast<std::size_t>(s.fan_out) * s.fan_in + s.fan_out;
        }
    }
    return n;
}

namespace {

template <typename T>
Tensor<T> run_stem(const std::vector<LayerState<T>>& stem, const Tensor<T>& input,
                   std::vector<Tensor<T>>* cache_in, std::vector<std::vector<std::uint32_t>>* cache_pool) {
    Tensor<T> x = input;
    for (const auto& layer : stem) {
        if (cache_in) cache_in->push_back(x);
        switch (layer.spec.kind) {
            case LayerKind::Conv:
                x = conv2d_forward(x, layer.spec, layer.w, layer.b);
                break;
            case LayerKind::MaxPool: {
                std::vector<std::uint32_t> idx;
                x = maxpool2d_forward(x, idx);
                if (cache_pool) cache_pool->push_back(std::move(idx));
                break;
            }
            case LayerKind::Relu:
                x = relu_forward(x);
                break;
            default:
                throw std::logic_error("stem layer kind");
        }
    }
    return x;
}

template <typename T>
Tensor<T> flatten2(const Tensor<T>& x) {
    return x.reshaped({x.dim(0), x.size() / x.dim(0)});
}

} // namespace

template <typename T>
Tensor<T> Network<T>::forward(const Tensor<T>* local, const Tensor<T>* global, Cache<T>* cache) const {
    Tensor<T> head_input;
    if (uses_local()) {
        if (!local) throw std::invalid_argument("forward: mode " + std::string(mode_name(mode)) +
                                                " requires a local input");
        Tensor<T> lf = run_stem(local_stem, *local, cache ? &cache->local_in : nullptr,
                                cache ? &cache->local_pool : nullptr);
        if (cache) cache->local_out_shape = lf.shape();
        head_input = flatten2(lf);
    }
    if (uses_global()) {
        if (!global) throw std::invalid_argument("forward: mode " + std::string(mode_name(mode)) +
                                                 " requires a global input");
        Tensor<T> gf = run_stem(global_stem, *global, cache ? &cache->global_in : nullptr,
                                cache ? &cache->global_pool : nullptr);
        if (cache) cache->global_out_shape = gf.shape();
        Tensor<T> gflat = flatten2(gf);
        if (mode == NetMode::Dual) {
            if (cache) {
                cache->fa = head_input.dim(1);
                cache->fb = gflat.dim(1);
            }
            head_input = concat_forward(head_input, gflat);
        } else {
            head_input = std::move(gflat);
        }
    }

    Tensor<T> x = std::move(head_input);
    for (const auto& layer : head) {
        if (cache) cache->head_in.push_back(x);
        switch (layer.spec.kind) {
            case LayerKind::FullyConnected:
                x = fc_forward(x, layer.spec, layer.w, layer.b);
                break;
            case LayerKind::Relu:
                x = relu_forward(x);
                break;
            case LayerKind::Sigmoid:
                x = sigmoid_forward(x);
                break;
            default:
                throw std::logic_error("head layer kind");
        }
    }
    return x;
}

namespace {

template <typename T>
Tensor<T> stem_backward(const std::vector<LayerState<T>>& stem, const std::vector<Tensor<T>>& inputs,
                        const std::vector<std::vector<std::uint32_t>>& pools, const Tensor<T>& grad_top,
                        std::vector<LayerGrads<T>>& grads) {
    Tensor<T> g = grad_top;
    std::size_t pool_idx = pools.size();
    for (std::size_t i = stem.size(); i-- > 0;) {
        const auto& layer = stem[i];
        const Tensor<T>& x = inputs[i];
        switch (layer.spec.kind) {
            case LayerKind::Conv: {
                Tensor<T> gin;
                const bool need_input = i > 0;
                conv2d_backward(x, layer.spec, layer.w, g, need_input ? &gin : nullptr, grads[i].w,
                                grads[i].b);
                if (need_input) g = std::move(gin);
                break;
            }
            case LayerKind::MaxPool:
                g = maxpool2d_backward(x.shape(), pools[--pool_idx], g);
                break;
            case LayerKind::Relu:
                g = relu_backward(x, g);
                break;
            default:
                throw std::logic_error("stem layer kind");
        }
        if (i == 0) return g;
    }
    return g;
}

} // namespace

template <typename T>
void Network<T>::backward(const Cache<T>& cache, const Tensor<T>& grad_out, Gradients<T>& grads) const {
    Tensor<T> g = grad_out;
    for (std::size_t i = head.size(); i-- > 0;) {
        const auto& layer = head[i];
        const Tensor<T>& x = cache.head_in[i];
        switch (layer.spec.kind) {
            case LayerKind::FullyConnected: {
                Tensor<T> gin;
                fc_backward(x, layer.spec, layer.w, g, &gin, grads.head[i].w, grads.head[i].b);
                g = std::move(gin);
                break;
            }
            case LayerKind::Relu:
                g = relu_backward(x, g);
                break;
            case LayerKind::Sigmoid:
                g = sigmoid_backward(x, g);
                break;
            default:
                throw std::logic_error("head layer kind");
        }
    }

    Tensor<T> g_local, g_global;
    if (mode == NetMode::Dual) {
        concat_backward(cache.fa, cache.fb, g, g_local, g_global);
    } else if (mode == NetMode::LocalOnly) {
        g_local = std::move(g);
    } else {
        g_global = std::move(g);
    }

    if (uses_local())
        stem_backward(local_stem, cache.local_in, cache.local_pool,
                      g_local.reshaped(cache.local_out_shape), grads.local);
    if (uses_global())
        stem_backward(global_stem, cache.global_in, cache.global_pool,
                      g_global.reshaped(cache.global_out_shape), grads.global);
}

template <typename T>
Gradients<T> Network<T>::make_gradients() const {
    Gradients<T> g;
    auto build = [](const std::vector<LayerState<T>>& section, std::vector<LayerGrads<T>>& out) {
        out.resize(section.size());
        for (std::size_t i = 0; i < section.size(); ++i) {
            if (!section[i].spec.has_params()) continue;
            out[i].w = Tensor<T>(section[i].w.shape());
            out[i].b = Tensor<T>(section[i].b.shape());
        }
    };
    build(local_stem, g.local);
    build(global_stem, g.global);
    build(head, g.head);
    return g;
}

template <typename T>
void Network<T>::sgd_step(const Gradients<T>& grads, T lr, T momentum, T weight_decay) {
    auto apply = [&](std::vector<LayerState<T>>& section, const std::vector<LayerGrads<T>>& gsec) {
        for (std::size_t i = 0; i < section.size(); ++i) {
            if (!section[i].spec.has_params()) continue;
            sgd_momentum_step(section[i].w, section[i].vw, gsec[i].w, lr, momentum, weight_decay);
            sgd_momentum_step(section[i].b, section[i].vb, gsec[i].b, lr, momentum, T(0));
        }
    };
    apply(local_stem, grads.local);
    apply(global_stem, grads.global);
    apply(head, grads.head);
}

template <typename T>
std::vector<typename Network<T>::NamedParam> Network<T>::named_params() {
    std::vector<NamedParam> out;
    auto walk = [&](std::vector<LayerState<T>>& section, const char* prefix) {
        for (auto& layer : section) {
            if (!layer.spec.has_params()) continue;
            out.push_back({std::string(prefix) + "." + layer.spec.name + ".weight", &layer.w});
            out.push_back({std::string(prefix) + "." + layer.spec.name + ".bias", &layer.b});
        }
    };
    walk(local_stem, "local");
    walk(global_stem, "global");
    walk(head, "head");
    return out;
}

template <typename T>
template <typename U>
Network<U> Network<T>::cast() const {
    Network<U> out;
    out.mode = mode;
    out.profile_name = profile_name;
    out.positive_class = positive_class;
    out.local_feat = local_feat;
    out.global_feat = global_feat;
    out.output_width = output_width;
    auto conv_section = [](const std::vector<LayerState<T>>& in, std::vector<LayerState<U>>& to) {
        to.resize(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) {
            to[i].spec = in[i].spec;
            to[i].w = in[i].w.template cast<U>();
            to[i].b = in[i].b.template cast<U>();
            to[i].vw = in[i].vw.template cast<U>();
            to[i].vb = in[i].vb.template cast<U>();
        }
    };
    conv_section(local_stem, out.local_stem);
    conv_section(global_stem, out.global_stem);
    conv_section(head, out.head);
    return out;
}

template class Network<float>;
template class Network<double>;
template struct Gradients<float>;
template struct Gradients<double>;
template Network<double> Network<float>::cast<double>() const;
template Network<float> Network<double>::cast<float>() const;
template Network<float> Network<float>::cast<float>() const;
template Network<double> Network<double>::cast<double>() const;

} // namespace aeroseg::nn
