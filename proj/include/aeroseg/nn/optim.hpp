#pragma once

#include "aeroseg/tensor.hpp"

namespace aeroseg::nn {

// v <- momentum*v - lr*(g + weight_decay*w); w <- w + v
// Callers pass weight_decay = 0 for bias tensors; decay applies to weights only.
template <typename T>
void sgd_momentum_step(Tensor<T>& param, Tensor<T>& velocity, const Tensor<T>& grad, T lr, T momentum,
                       T weight_decay);

} // namespace aeroseg::nn
