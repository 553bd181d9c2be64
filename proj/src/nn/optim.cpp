#include "aeroseg/nn/optim.hpp"

#include <stdexcept>

#include "aeroseg/simd/kernels.hpp"

namespace aeroseg::nn {

template <typename T>
void sgd_momentum_step(Tensor<T>& param, Tensor<T>& velocity, const Tensor<T>& grad, T lr, T momentum,
                       T weight_decay) {
    if (!param.same_shape(velocity) || !param.same_shape(grad))
        throw std::invalid_argument("sgd_momentum_step: param/velocity/grad shapes differ");
    kern::ops<T>().sgd_update(param.data(), velocity.data(), grad.data(), lr, momentum, weight_decay,
                              param.size());
}

template void sgd_momentum_step<float>(Tensor<float>&, Tensor<float>&, const Tensor<float>&, float,
                                       float, float);
template void sgd_momentum_step<double>(Tensor<double>&, Tensor<double>&, const Tensor<double>&, double,
                                        double, double);

} // namespace aeroseg::nn
