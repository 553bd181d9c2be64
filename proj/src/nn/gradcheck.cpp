#include "aeroseg/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aeroseg/nn/loss.hpp"

namespace aeroseg::nn {

namespace {

using T = double;

// The perturbed forwards evaluate the baseline activation branch: pooling
// reuses the stored argmax switches and rectifiers reuse the baseline masks.
// That is the piecewise-smooth function the analytic backward differentiates;
// without freezing, argmax flips near ties inject O(gap/epsilon) noise.

Tensor<T> pool_via_switches(const Tensor<T>& input, const std::vector<std::uint32_t>& argmax,
                            const std::vector<std::size_t>& out_shape) {
    Tensor<T> out(out_shape);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = input[argmax[i]];
    return out;
}

Tensor<T> relu_via_mask(const Tensor<T>& input, const Tensor<T>& baseline_input) {
    Tensor<T> out(input.shape());
    for (std::size_t i = 0; i < input.size(); ++i)
        out[i] = baseline_input[i] > 0.0 ? input[i] : 0.0;
    return out;
}

struct StemReplay {
    const std::vector<LayerState<T>>* stem = nullptr;
    const std::vector<Tensor<T>>* inputs = nullptr;                 // baseline layer inputs
    const std::vector<std::vector<std::uint32_t>>* pools = nullptr; // baseline switches
};

Tensor<T> run_stem_from(const StemReplay& replay, std::size_t start, Tensor<T> x) {
    std::size_t pool_idx = 0;
    for (std::size_t i = 0; i < start; ++i)
        if ((*replay.stem)[i].spec.kind == LayerKind::MaxPool) ++pool_idx;
    for (std::size_t i = start; i < replay.stem->size(); ++i) {
        const auto& layer = (*replay.stem)[i];
        switch (layer.spec.kind) {
            case LayerKind::Conv:
                x = conv2d_forward(x, layer.spec, layer.w, layer.b);
                break;
            case LayerKind::MaxPool: {
                const std::size_t B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
                x = pool_via_switches(x, (*replay.pools)[pool_idx++], {B, C, H / 2, W / 2});
                break;
            }
            case LayerKind::Relu:
                x = relu_via_mask(x, (*replay.inputs)[i]);
                break;
            default:
                throw std::logic_error("stem layer kind");
        }
    }
    return x;
}

Tensor<T> run_head_from(const std::vector<LayerState<T>>& head, const std::vector<Tensor<T>>& inputs,
                        std::size_t start, Tensor<T> x) {
    for (std::size_t i = start; i < head.size(); ++i) {
        const auto& layer = head[i];
        switch (layer.spec.kind) {
            case LayerKind::FullyConnected:
                x = fc_forward(x, layer.spec, layer.w, layer.b);
                break;
            case LayerKind::Relu:
                x = relu_via_mask(x, inputs[i]);
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

enum class Section { Local, Global, Head };

struct SlotRef {
    Section section;
    std::size_t layer;
};

Tensor<T> slice_cols(const Tensor<T>& m, std::size_t from, std::size_t width) {
    Tensor<T> out({m.dim(0), width});
    for (std::size_t b = 0; b < m.dim(0); ++b)
        for (std::size_t j = 0; j < width; ++j) out.at2(b, j) = m.at2(b, from + j);
    return out;
}

// loss(plus) - loss(minus) accumulated per output term, so the difference
// never cancels against the full loss magnitude
double loss_pair_difference(const Tensor<T>& plus, const Tensor<T>& minus, const Tensor<T>& target) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double m = target[i];
        const double lp = -(m * std::log(plus[i]) + (1.0 - m) * std::log1p(-plus[i]));
        const double lm = -(m * std::log(minus[i]) + (1.0 - m) * std::log1p(-minus[i]));
        const double y = (lp - lm) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace

double grad_check(Network<double>& net, const Tensor<double>* local, const Tensor<double>* global,
                  const Tensor<double>& target, double epsilon, Rng& rng,
                  std::size_t samples_per_layer) {
    Cache<T> cache;
    Tensor<T> baseline_out = net.forward(local, global, &cache);
    auto baseline = cross_entropy_loss(baseline_out, target);
    Gradients<T> grads = net.make_gradients();
    grads.zero();
    net.backward(cache, baseline.grad, grads);

    Tensor<T> local_flat, global_flat;
    if (net.mode == NetMode::Dual) {
        local_flat = slice_cols(cache.head_in[0], 0, cache.fa);
        global_flat = slice_cols(cache.head_in[0], cache.fa, cache.fb);
    }
    const StemReplay local_replay{&net.local_stem, &cache.local_in, &cache.local_pool};
    const StemReplay global_replay{&net.global_stem, &cache.global_in, &cache.global_pool};

    auto output_with_perturbed = [&](const SlotRef& slot) -> Tensor<T> {
        Tensor<T> head_input;
        if (slot.section == Section::Head)
            return run_head_from(net.head, cache.head_in, slot.layer, cache.head_in[slot.layer]);
        if (slot.section == Section::Local) {
            Tensor<T> lf = run_stem_from(local_replay, slot.layer, cache.local_in[slot.layer]);
            Tensor<T> lflat = lf.reshaped({lf.dim(0), lf.size() / lf.dim(0)});
            head_input = net.mode == NetMode::Dual ? concat_forward(lflat, global_flat) : lflat;
        } else {
            Tensor<T> gf = run_stem_from(global_replay, slot.layer, cache.global_in[slot.layer]);
            Tensor<T> gflat = gf.reshaped({gf.dim(0), gf.size() / gf.dim(0)});
            head_input = net.mode == NetMode::Dual ? concat_forward(local_flat, gflat) : gflat;
        }
        return run_head_from(net.head, cache.head_in, 0, head_input);
    };

    double worst = 0.0;
    auto check_section = [&](std::vector<LayerState<T>>& section, std::vector<LayerGrads<T>>& gsec,
                             Section which) {
        for (std::size_t li = 0; li < section.size(); ++li) {
            auto& layer = section[li];
            if (!layer.spec.has_params()) continue;
            const std::size_t wn = layer.w.size(), total = wn + layer.b.size();
            const std::size_t n = std::min(total, samples_per_layer);
            for (std::size_t s = 0; s < n; ++s) {
                // exhaustive when the layer fits in the budget
                const std::size_t flat =
                    total <= samples_per_layer ? s : static_cast<std::size_t>(rng.below(total));
                Tensor<T>& tensor = flat < wn ? layer.w : layer.b;
                const std::size_t idx = flat < wn ? flat : flat - wn;
                const double analytic = flat < wn ? gsec[li].w[idx] : gsec[li].b[idx];

                const double saved = tensor[idx];
                const SlotRef slot{which, li};
                tensor[idx] = saved + epsilon;
                const Tensor<T> out_plus = output_with_perturbed(slot);
                tensor[idx] = saved - epsilon;
                const Tensor<T> out_minus = output_with_perturbed(slot);
                tensor[idx] = saved;

                const double numeric =
                    loss_pair_difference(out_plus, out_minus, target) / (2.0 * epsilon);
                const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
                worst = std::max(worst, std::abs(analytic - numeric) / denom);
            }
        }
    };
    check_section(net.local_stem, grads.local, Section::Local);
    check_section(net.global_stem, grads.global, Section::Global);
    check_section(net.head, grads.head, Section::Head);
    return worst;
}

} // namespace aeroseg::nn
