#pragma once

#include <string>
#include <vector>

#include "aeroseg/nn/layers.hpp"
#include "aeroseg/tensor.hpp"
#include "aeroseg/util/rng.hpp"

namespace aeroseg::nn {

enum class NetMode { Dual, LocalOnly, GlobalOnly, RaClassifier };

const char* mode_name(NetMode m);
NetMode mode_from_name(const std::string& name);

// A layer plus its learnable state. Momentum buffers are zero at
// construction and shapes never change afterwards.
template <typename T>
struct LayerState {
    LayerSpec spec;
    Tensor<T> w, b;    // empty unless spec.has_params()
    Tensor<T> vw, vb;  // momentum buffers, shaped like w/b
};

template <typename T>
struct LayerGrads {
    Tensor<T> w, b;
};

template <typename T>
struct Gradients {
    std::vector<LayerGrads<T>> local, global, head;
    void zero();
};

// Per-forward activation cache used by backward.
template <typename T>
struct Cache {
    std::vector<Tensor<T>> local_in, global_in, head_in;
    std::vector<std::vector<std::uint32_t>> local_pool, global_pool, head_pool;
    std::vector<std::size_t> local_out_shape, global_out_shape; // [B,C,H,W] pre-flatten
    std::size_t fa = 0, fb = 0;                                 // concat seam
};

// Two input stems and a fusion head. Which pieces exist depends on the mode:
//   Dual         local stem + global stem + head (concat first)
//   LocalOnly    local stem + head
//   GlobalOnly   global stem + head
//   RaClassifier global stem + head ending in a single sigmoid unit
template <typename T>
class Network {
public:
    NetMode mode = NetMode::Dual;
    std::string profile_name;
    std::string positive_class = "building";
    std::vector<LayerState<T>> local_stem, global_stem, head;
    std::size_t local_feat = 0;   // flattened local stem width
    std::size_t global_feat = 0;  // flattened global stem width
    std::size_t output_width = 0; // head output width (w_m^2, or 1 for RA)

    // Xavier weights, zero biases, zero momentum; deterministic per rng state.
    void init_params(Rng& rng);

    std::size_t parameter_count() const;

    bool uses_local() const { return mode == NetMode::Dual || mode == NetMode::LocalOnly; }
    bool uses_global() const { return mode != NetMode::LocalOnly; }

    // local is [B,3,wl,wl], global is [B,3,wg,wg]; unused inputs may be null.
    Tensor<T> forward(const Tensor<T>* local, const Tensor<T>* global, Cache<T>* cache = nullptr) const;

    void backward(const Cache<T>& cache, const Tensor<T>& grad_out, Gradients<T>& grads) const;

    Gradients<T> make_gradients() const;

    // One optimizer step over every parameter tensor; weight decay applies to
    // weights only, never biases.
    void sgd_step(const Gradients<T>& grads, T lr, T momentum, T weight_decay);

    struct NamedParam {
        std::string name;
        Tensor<T>* tensor;
    };
    // "<section>.<layer>.weight" / ".bias" in definition order
    std::vector<NamedParam> named_params();

    template <typename U>
    Network<U> cast() const;
};

// Resolves conv/pool spatial arithmetic through a stem and returns the
// flattened feature width. Throws on inconsistent arithmetic (odd pool
// extents, vanishing outputs). Also the "symbolic" side of the shape audit.
std::vector<std::vector<std::size_t>> propagate_stem_shapes(std::vector<LayerSpec>& stem, int in_ch,
                                                            int in_h, int in_w);

using NetworkF = Network<float>;
using NetworkD = Network<double>;

} // namespace aeroseg::nn
