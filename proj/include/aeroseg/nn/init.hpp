#pragma once

#include "aeroseg/tensor.hpp"
#include "aeroseg/util/rng.hpp"

namespace aeroseg::nn {

// Fan counts derived from tensor shape: conv [Co,Ci,kh,kw] -> (Ci*kh*kw, Co*kh*kw),
// fc [out,in] -> (in, out).
struct FanPair {
    std::size_t fan_in = 0;
    std::size_t fan_out = 0;
};
FanPair fans_from_shape(const std::vector<std::size_t>& shape);

// Uniform on [-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out))].
template <typename T>
Tensor<T> xavier_init(const std::vector<std::size_t>& shape, Rng& rng);

} // namespace aeroseg::nn
