#include "aeroseg/nn/init.hpp"

#include <cmath>
#include <stdexcept>

namespace aeroseg::nn {

FanPair fans_from_shape(const std::vector<std::size_t>& shape) {
    FanPair f;
    if (shape.size() == 4) {
        const std::size_t receptive = shape[2] * shape[3];
        f.fan_in = shape[1] * receptive;
        f.fan_out = shape[0] * receptive;
    } else if (shape.size() == 2) {
        f.fan_in = shape[1];
        f.fan_out = shape[0];
    } else {
        throw std::invalid_argument("xavier_init: cannot derive fans from rank " +
                                    std::to_string(shape.size()));
    }
    if (f.fan_in == 0 || f.fan_out == 0) throw std::invalid_argument("xavier_init: zero fan");
    return f;
}

template <typename T>
Tensor<T> xavier_init(const std::vector<std::size_t>& shape, Rng& rng) {
    const FanPair f = fans_from_shape(shape);
    const double bound = std::sqrt(6.0 / static_cast<double>(f.fan_in + f.fan_out));
    Tensor<T> t(shape);
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = static_cast<T>(rng.uniform(-bound, bound));
    return t;
}

template Tensor<float> xavier_init<float>(const std::vector<std::size_t>&, Rng&);
template Tensor<double> xavier_init<double>(const std::vector<std::size_t>&, Rng&);

} // namespace aeroseg::nn
