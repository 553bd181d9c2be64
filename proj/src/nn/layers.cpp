#include "aeroseg/nn/layers.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "aeroseg/simd/kernels.hpp"

namespace aeroseg::nn {

const char* kind_name(LayerKind k) {
    switch (k) {
        case LayerKind::Conv: return "conv";
        case LayerKind::MaxPool: return "maxpool";
        case LayerKind::Relu: return "relu";
        case LayerKind::FullyConnected: return "fullyconnected";
        case LayerKind::Concat: return "concat";
        case LayerKind::Sigmoid: return "sigmoid";
    }
    return "?";
}

LayerSpec LayerSpec::conv(std::string name, int in_ch, int out_ch, int k, int stride, int pad) {
    if (k < 1 || stride < 1 || pad < 0)
        throw std::invalid_argument("conv " + name + ": kernel/stride must be positive, pad nonnegative");
    LayerSpec s;
    s.kind = LayerKind::Conv;
    s.name = std::move(name);
    s.in_ch = in_ch;
    s.out_ch = out_ch;
    s.kh = s.kw = k;
    s.stride = stride;
    s.pad = pad;
    return s;
}

LayerSpec LayerSpec::maxpool(std::string name) {
    LayerSpec s;
    s.kind = LayerKind::MaxPool;
    s.name = std::move(name);
    s.kh = s.kw = 2;
    s.stride = 2;
    return s;
}

LayerSpec LayerSpec::relu(std::string name) {
    LayerSpec s;
    s.kind = LayerKind::Relu;
    s.name = std::move(name);
    return s;
}

LayerSpec LayerSpec::sigmoid(std::string name) {
    LayerSpec s;
    s.kind = LayerKind::Sigmoid;
    s.name = std::move(name);
    return s;
}

LayerSpec LayerSpec::fully_connected(std::string name, int fan_in, int fan_out) {
    if (fan_in < 1 || fan_out < 1)
        throw std::invalid_argument("fc " + name + ": fan-in/fan-out must be positive");
    LayerSpec s;
    s.kind = LayerKind::FullyConnected;
    s.name = std::move(name);
    s.fan_in = fan_in;
    s.fan_out = fan_out;
    return s;
}

int conv_out_extent(int in, int k, int stride, int pad) {
    const int numer = in + 2 * pad - k;
    if (numer < 0) throw std::invalid_argument("conv: kernel larger than padded input");
    const int out = numer / stride + 1;
    if (out < 1) throw std::invalid_argument("conv: output extent < 1");
    return out;
}

namespace {

template <typename T>
void check_conv_shapes(const Tensor<T>& input, const LayerSpec& spec, const Tensor<T>& weight,
                       const Tensor<T>& bias) {
    if (input.rank() != 4)
        throw std::invalid_argument(spec.name + ": conv input must be rank 4, got " + input.shape_str());
    if (static_cast<int>(input.dim(1)) != spec.in_ch || static_cast<int>(input.dim(2)) != spec.in_h ||
        static_cast<int>(input.dim(3)) != spec.in_w)
        throw std::invalid_argument(spec.name + ": conv input " + input.shape_str() + " does not match spec");
    const std::vector<std::size_t> wshape = {static_cast<std::size_t>(spec.out_ch),
                                             static_cast<std::size_t>(spec.in_ch),
                                             static_cast<std::size_t>(spec.kh),
                                             static_cast<std::size_t>(spec.kw)};
    if (weight.shape() != wshape)
        throw std::invalid_argument(spec.name + ": conv weight shape " + weight.shape_str() + " mismatch");
    if (bias.size() != static_cast<std::size_t>(spec.out_ch))
        throw std::invalid_argument(spec.name + ": conv bias size mismatch");
}

// Gathers one output row's receptive fields: buf[ow*taps + t] where t runs
// over (ci, kh, kw) — the same ordering as a weight row. Out-of-image taps
// (padding) become zeros.
template <typename T>
void gather_row(const Tensor<T>& input, const LayerSpec& spec, std::size_t b, int oh, T* buf) {
    const int taps_per_ci = spec.kh * spec.kw;
    const int taps = spec.in_ch * taps_per_ci;
    for (int ow = 0; ow < spec.out_w; ++ow) {
        T* dst = buf + static_cast<std::size_t>(ow) * taps;
        const int ih0 = oh * spec.stride - spec.pad;
        const int iw0 = ow * spec.stride - spec.pad;
        for (int ci = 0; ci < spec.in_ch; ++ci) {
            for (int r = 0; r < spec.kh; ++r) {
                const int ih = ih0 + r;
                T* drow = dst + ci * taps_per_ci + r * spec.kw;
                if (ih < 0 || ih >= spec.in_h) {
                    for (int c = 0; c < spec.kw; ++c) drow[c] = T(0);
                    continue;
                }
                const T* src = &input.at4(b, static_cast<std::size_t>(ci), static_cast<std::size_t>(ih), 0);
                for (int c = 0; c < spec.kw; ++c) {
                    const int iw = iw0 + c;
                    drow[c] = (iw < 0 || iw >= spec.in_w) ? T(0) : src[iw];
                }
            }
        }
    }
}

} // namespace

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const LayerSpec& spec, const Tensor<T>& weight,
                         const Tensor<T>& bias) {
    if (spec.kind != LayerKind::Conv) throw std::invalid_argument("conv2d: spec kind mismatch");
    check_conv_shapes(input, spec, weight, bias);
    const auto& k = kern::ops<T>();
    const std::size_t batch = input.dim(0);
    const int taps = spec.in_ch * spec.kh * spec.kw;
    Tensor<T> out({batch, static_cast<std::size_t>(spec.out_ch), static_cast<std::size_t>(spec.out_h),
                   static_cast<std::size_t>(spec.out_w)});
    std::vector<T> buf(static_cast<std::size_t>(spec.out_w) * taps);
    for (std::size_t b = 0; b < batch; ++b) {
        for (int oh = 0; oh < spec.out_h; ++oh) {
            gather_row(input, spec, b, oh, buf.data());
            for (int co = 0; co < spec.out_ch; ++co) {
                const T* wrow = weight.data() + static_cast<std::size_t>(co) * taps;
                T* orow = &out.at4(b, static_cast<std::size_t>(co), static_cast<std::size_t>(oh), 0);
                for (int ow = 0; ow < spec.out_w; ++ow)
                    orow[ow] = bias[static_cast<std::size_t>(co)] +
                               k.dot(wrow, buf.data() + static_cast<std::size_t>(ow) * taps,
                                     static_cast<std::size_t>(taps));
            }
        }
    }
    return out;
}

template <typename T>
void conv2d_backward(const Tensor<T>& input, const LayerSpec& spec, const Tensor<T>& weight,
                     const Tensor<T>& grad_out, Tensor<T>* grad_input, Tensor<T>& grad_weight,
                     Tensor<T>& grad_bias) {
    check_conv_shapes(input, spec, weight, grad_bias);
    const auto& k = kern::ops<T>();
    const std::size_t batch = input.dim(0);
    const int taps_per_ci = spec.kh * spec.kw;
    const int taps = spec.in_ch * taps_per_ci;
    if (grad_weight.shape() != weight.shape()) grad_weight = Tensor<T>(weight.shape());
    if (grad_input) *grad_input = Tensor<T>(input.shape());

    std::vector<T> buf(static_cast<std::size_t>(spec.out_w) * taps);
    std::vector<T> gbuf(static_cast<std::size_t>(spec.out_w) * taps);
    for (std::size_t b = 0; b < batch; ++b) {
        for (int oh = 0; oh < spec.out_h; ++oh) {
            gather_row(input, spec, b, oh, buf.data());
            if (grad_input) std::memset(gbuf.data(), 0, gbuf.size() * sizeof(T));
            for (int co = 0; co < spec.out_ch; ++co) {
                const T* grow = &grad_out.at4(b, static_cast<std::size_t>(co), static_cast<std::size_t>(oh), 0);
                T* dwrow = grad_weight.data() + static_cast<std::size_t>(co) * taps;
                const T* wrow = weight.data() + static_cast<std::size_t>(co) * taps;
                T gb = T(0);
                for (int ow = 0; ow < spec.out_w; ++ow) {
                    const T g = grow[ow];
                    gb += g;
                    k.axpy(g, buf.data() + static_cast<std::size_t>(ow) * taps, dwrow,
                           static_cast<std::size_t>(taps));
                    if (grad_input)
                        k.axpy(g, wrow, gbuf.data() + static_cast<std::size_t>(ow) * taps,
                               static_cast<std::size_t>(taps));
                }
                grad_bias[static_cast<std::size_t>(co)] += gb;
            }
            if (!grad_input) continue;
            // scatter the column gradients back into the input image
            for (int ow = 0; ow < spec.out_w; ++ow) {
                const T* src = gbuf.data() + static_cast<std::size_t>(ow) * taps;
                const int ih0 = oh * spec.stride - spec.pad;
                const int iw0 = ow * spec.stride - spec.pad;
                for (int ci = 0; ci < spec.in_ch; ++ci) {
                    for (int r = 0; r < spec.kh; ++r) {
                        const int ih = ih0 + r;
                        if (ih < 0 || ih >= spec.in_h) continue;
                        T* drow = &grad_input->at4(b, static_cast<std::size_t>(ci),
                                                   static_cast<std::size_t>(ih), 0);
                        const T* srow = src + ci * taps_per_ci + r * spec.kw;
                        for (int c = 0; c < spec.kw; ++c) {
                            const int iw = iw0 + c;
                            if (iw >= 0 && iw < spec.in_w) drow[iw] += srow[c];
                        }
                    }
                }
            }
        }
    }
}

template <typename T>
Tensor<T> maxpool2d_forward(const Tensor<T>& input, std::vector<std::uint32_t>& argmax) {
    if (input.rank() != 4) throw std::invalid_argument("maxpool: input must be rank 4");
    const std::size_t batch = input.dim(0), ch = input.dim(1), h = input.dim(2), w = input.dim(3);
    if (h % 2 != 0 || w % 2 != 0)
        throw std::invalid_argument("maxpool: spatial extents must be even, got " + input.shape_str());
    const std::size_t oh = h / 2, ow = w / 2;
    Tensor<T> out({batch, ch, oh, ow});
    argmax.assign(out.size(), 0);
    std::size_t oi = 0;
    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t c = 0; c < ch; ++c) {
            for (std::size_t y = 0; y < oh; ++y) {
                for (std::size_t x = 0; x < ow; ++x, ++oi) {
                    const std::size_t base = ((b * ch + c) * h + 2 * y) * w + 2 * x;
                    // strict > keeps the first row-major element on ties
                    std::size_t best = base;
                    T bv = input[base];
                    const std::size_t cand[3] = {base + 1, base + w, base + w + 1};
                    for (std::size_t idx : cand) {
                        if (input[idx] > bv) {
                            bv = input[idx];
                            best = idx;
                        }
                    }
                    out[oi] = bv;
                    argmax[oi] = static_cast<std::uint32_t>(best);
                }
            }
        }
    }
    return out;
}

template <typename T>
Tensor<T> maxpool2d_backward(const std::vector<std::size_t>& input_shape,
                             const std::vector<std::uint32_t>& argmax, const Tensor<T>& grad_out) {
    if (argmax.size() != grad_out.size())
        throw std::invalid_argument("maxpool backward: argmax/grad size mismatch");
    Tensor<T> grad_in(input_shape);
    for (std::size_t i = 0; i < argmax.size(); ++i) grad_in[argmax[i]] += grad_out[i];
    return grad_in;
}

template <typename T>
Tensor<T> relu_forward(const Tensor<T>& input) {
    Tensor<T> out(input.shape());
    kern::ops<T>().relu_fwd(input.data(), out.data(), input.size());
    return out;
}

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& input, const Tensor<T>& grad_out) {
    if (!input.same_shape(grad_out)) throw std::invalid_argument("relu backward: shape mismatch");
    Tensor<T> grad_in(input.shape());
    kern::ops<T>().relu_bwd(input.data(), grad_out.data(), grad_in.data(), input.size());
    return grad_in;
}

template <typename T>
Tensor<T> sigmoid_forward(const Tensor<T>& input) {
    const T lo = static_cast<T>(kSigmoidClamp);
    const T hi = static_cast<T>(1.0 - kSigmoidClamp);
    Tensor<T> out(input.shape());
    for (std::size_t i = 0; i < input.size(); ++i) {
        const T s = T(1) / (T(1) + std::exp(-input[i]));
        out[i] = s < lo ? lo : (s > hi ? hi : s);
    }
    return out;
}

template <typename T>
Tensor<T> sigmoid_backward(const Tensor<T>& input, const Tensor<T>& grad_out) {
    if (!input.same_shape(grad_out)) throw std::invalid_argument("sigmoid backward: shape mismatch");
    Tensor<T> grad_in(input.shape());
    for (std::size_t i = 0; i < input.size(); ++i) {
        const T s = T(1) / (T(1) + std::exp(-input[i]));
        grad_in[i] = grad_out[i] * s * (T(1) - s);
    }
    return grad_in;
}

template <typename T>
Tensor<T> fc_forward(const Tensor<T>& input, const LayerSpec& spec, const Tensor<T>& weight,
                     const Tensor<T>& bias) {
    if (input.rank() != 2) throw std::invalid_argument(spec.name + ": fc input must be rank 2");
    const std::size_t batch = input.dim(0);
    const std::size_t fi = static_cast<std::size_t>(spec.fan_in);
    const std::size_t fo = static_cast<std::size_t>(spec.fan_out);
    if (input.dim(1) != fi)
        throw std::invalid_argument(spec.name + ": fc input width " + std::to_string(input.dim(1)) +
                                    " != fan-in " + std::to_string(fi));
    if (weight.shape() != std::vector<std::size_t>{fo, fi} || bias.size() != fo)
        throw std::invalid_argument(spec.name + ": fc parameter shape mismatch");
    const auto& k = kern::ops<T>();
    Tensor<T> out({batch, fo});
    for (std::size_t b = 0; b < batch; ++b) {
        const T* in_row = input.data() + b * fi;
        T* out_row = out.data() + b * fo;
        for (std::size_t j = 0; j < fo; ++j)
            out_row[j] = bias[j] + k.dot(weight.data() + j * fi, in_row, fi);
    }
    return out;
}

template <typename T>
void fc_backward(const Tensor<T>& input, const LayerSpec& spec, const Tensor<T>& weight,
                 const Tensor<T>& grad_out, Tensor<T>* grad_input, Tensor<T>& grad_weight,
                 Tensor<T>& grad_bias) {
    const std::size_t batch = input.dim(0);
    const std::size_t fi = static_cast<std::size_t>(spec.fan_in);
    const std::size_t fo = static_cast<std::size_t>(spec.fan_out);
    const auto& k = kern::ops<T>();
    if (grad_weight.shape() != weight.shape()) grad_weight = Tensor<T>(weight.shape());
    if (grad_input) *grad_input = Tensor<T>(input.shape());
    for (std::size_t b = 0; b < batch; ++b) {
        const T* in_row = input.data() + b * fi;
        const T* g_row = grad_out.data() + b * fo;
        for (std::size_t j = 0; j < fo; ++j) {
            const T g = g_row[j];
            grad_bias[j] += g;
            k.axpy(g, in_row, grad_weight.data() + j * fi, fi);
            if (grad_input) k.axpy(g, weight.data() + j * fi, grad_input->data() + b * fi, fi);
        }
    }
}

template <typename T>
Tensor<T> concat_forward(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.rank() != 2 || b.rank() != 2) throw std::invalid_argument("concat: inputs must be rank 2");
    if (a.dim(0) != b.dim(0))
        throw std::invalid_argument("concat: batch extents differ (" + std::to_string(a.dim(0)) + " vs " +
                                    std::to_string(b.dim(0)) + ")");
    const std::size_t batch = a.dim(0), fa = a.dim(1), fb = b.dim(1);
    Tensor<T> out({batch, fa + fb});
    for (std::size_t i = 0; i < batch; ++i) {
        std::memcpy(out.data() + i * (fa + fb), a.data() + i * fa, fa * sizeof(T));
        std::memcpy(out.data() + i * (fa + fb) + fa, b.data() + i * fb, fb * sizeof(T));
    }
    return out;
}

template <typename T>
void concat_backward(std::size_t fa, std::size_t fb, const Tensor<T>& grad_out, Tensor<T>& grad_a,
                     Tensor<T>& grad_b) {
    if (grad_out.rank() != 2 || grad_out.dim(1) != fa + fb)
        throw std::invalid_argument("concat backward: gradient width mismatch");
    const std::size_t batch = grad_out.dim(0);
    grad_a = Tensor<T>({batch, fa});
    grad_b = Tensor<T>({batch, fb});
    for (std::size_t i = 0; i < batch; ++i) {
        std::memcpy(grad_a.data() + i * fa, grad_out.data() + i * (fa + fb), fa * sizeof(T));
        std::memcpy(grad_b.data() + i * fb, grad_out.data() + i * (fa + fb) + fa, fb * sizeof(T));
    }
}

#define AEROSEG_INSTANTIATE(T)                                                                        \
    template Tensor<T> conv2d_forward<T>(const Tensor<T>&, const LayerSpec&, const Tensor<T>&,       \
                                         const Tensor<T>&);                                          \
    template void conv2d_backward<T>(const Tensor<T>&, const LayerSpec&, const Tensor<T>&,           \
                                     const Tensor<T>&, Tensor<T>*, Tensor<T>&, Tensor<T>&);          \
    template Tensor<T> maxpool2d_forward<T>(const Tensor<T>&, std::vector<std::uint32_t>&);          \
    template Tensor<T> maxpool2d_backward<T>(const std::vector<std::size_t>&,                        \
                                             const std::vector<std::uint32_t>&, const Tensor<T>&);   \
    template Tensor<T> relu_forward<T>(const Tensor<T>&);                                            \
    template Tensor<T> relu_backward<T>(const Tensor<T>&, const Tensor<T>&);                         \
    template Tensor<T> sigmoid_forward<T>(const Tensor<T>&);                                         \
    template Tensor<T> sigmoid_backward<T>(const Tensor<T>&, const Tensor<T>&);                      \
    template Tensor<T> fc_forward<T>(const Tensor<T>&, const LayerSpec&, const Tensor<T>&,           \
                                     const Tensor<T>&);                                              \
    template void fc_backward<T>(const Tensor<T>&, const LayerSpec&, const Tensor<T>&,               \
                                 const Tensor<T>&, Tensor<T>*, Tensor<T>&, Tensor<T>&);              \
    template Tensor<T> concat_forward<T>(const Tensor<T>&, const Tensor<T>&);                        \
    template void concat_backward<T>(std::size_t, std::size_t, const Tensor<T>&, Tensor<T>&,         \
                                     Tensor<T>&);

AEROSEG_INSTANTIATE(float)
AEROSEG_INSTANTIATE(double)
#undef AEROSEG_INSTANTIATE

} // namespace aeroseg::nn
