#pragma once

#include "aeroseg/tensor.hpp"

namespace aeroseg::nn {

template <typename T>
struct LossReport {
    double value = 0.0;   // total cross entropy, summed over batch and pixels
    Tensor<T> grad;       // dL/dpred, same shape as pred
};

// L = -sum_n sum_p (m log m^ + (1-m) log(1-m^)), summed, not averaged.
// pred must lie in (0,1) (the sigmoid clamp guarantees it); target must be
// exactly 0 or 1, anything else throws. The value is accumulated in
// compensated double arithmetic so batch order cannot perturb it.
template <typename T>
LossReport<T> cross_entropy_loss(const Tensor<T>& pred, const Tensor<T>& target);

} // namespace aeroseg::nn
