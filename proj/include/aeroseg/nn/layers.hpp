#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aeroseg/tensor.hpp"

namespace aeroseg::nn {

enum class LayerKind { Conv, MaxPool, Relu, FullyConnected, Concat, Sigmoid };

const char* kind_name(LayerKind k);

// Fully resolved layer description. Spatial extents are filled in by shape
// propagation when the network is built; shape mismatches are construction
// errors, never silent broadcasts.
struct LayerSpec {
    LayerKind kind = LayerKind::Relu;
    std::string name;

    // conv / pool
    int in_ch = 0, out_ch = 0;
    int kh = 0, kw = 0;
    int stride = 1, pad = 0;
    int in_h = 0, in_w = 0;
    int out_h = 0, out_w = 0;

    // fully connected
    int fan_in = 0, fan_out = 0;

    bool has_params() const { return kind == LayerKind::Conv || kind == LayerKind::FullyConnected; }

    static LayerSpec conv(std::string name, int in_ch, int out_ch, int k, int stride, int pad);
    static LayerSpec maxpool(std::string name);
    static LayerSpec relu(std::string name);
    static LayerSpec sigmoid(std::string name);
    static LayerSpec fully_connected(std::string name, int fan_in, int fan_out);
};

// floor((in + 2*pad - k)/stride) + 1; throws if the result is < 1
int conv_out_extent(int in, int k, int stride, int pad);

// ---- conv2d ------------------------------------------------------------
// input [B,Ci,H,W], weight [Co,Ci,kh,kw], bias [Co] -> [B,Co,H',W']
template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const LayerSpec& spec,
                         const Tensor<T>& weight, const Tensor<T>& bias);

// grad_input may be null when the layer is first in its stem
template <typename T>
void conv2d_backward(const Tensor<T>& input, const LayerSpec& spec, const Tensor<T>& weight,
                     const Tensor<T>& grad_out, Tensor<T>* grad_input, Tensor<T>& grad_weight,
                     Tensor<T>& grad_bias);

// ---- maxpool2d (2x2, stride 2, no padding) -------------------------------
// Ties go to the first element in row-major window order; argmax holds the
// flat input index feeding each output element.
template <typename T>
Tensor<T> maxpool2d_forward(const Tensor<T>& input, std::vector<std::uint32_t>& argmax);

template <typename T>
Tensor<T> maxpool2d_backward(const std::vector<std::size_t>& input_shape,
                             const std::vector<std::uint32_t>& argmax, const Tensor<T>& grad_out);

// ---- elementwise ---------------------------------------------------------
template <typename T>
Tensor<T> relu_forward(const Tensor<T>& input);

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& input, const Tensor<T>& grad_out);

inline constexpr double kSigmoidClamp = 1e-7;

// 1/(1+e^-x), output clamped to [1e-7, 1-1e-7] so it can enter the loss
template <typename T>
Tensor<T> sigmoid_forward(const Tensor<T>& input);

// gx = gy * s*(1-s) with s the unclamped sigmoid of the cached input
template <typename T>
Tensor<T> sigmoid_backward(const Tensor<T>& input, const Tensor<T>& grad_out);

// ---- fully connected ------------------------------------------------------
// input [B,F], weight [F',F], bias [F'] -> [B,F']
template <typename T>
Tensor<T> fc_forward(const Tensor<T>& input, const LayerSpec& spec, const Tensor<T>& weight,
                     const Tensor<T>& bias);

template <typename T>
void fc_backward(const Tensor<T>& input, const LayerSpec& spec, const Tensor<T>& weight,
                 const Tensor<T>& grad_out, Tensor<T>* grad_input, Tensor<T>& grad_weight,
                 Tensor<T>& grad_bias);

// ---- concat ----------------------------------------------------------------
// [B,Fa] ++ [B,Fb] -> [B,Fa+Fb]; width 0 is permitted
template <typename T>
Tensor<T> concat_forward(const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
void concat_backward(std::size_t fa, std::size_t fb, const Tensor<T>& grad_out, Tensor<T>& grad_a,
                     Tensor<T>& grad_b);

} // namespace aeroseg::nn
