#include "aeroseg/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace aeroseg {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

template <typename T>
Tensor<T>::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(shape_product(shape_), T(0)) {}

template <typename T>
Tensor<T>::Tensor(std::vector<std::size_t> shape, std::vector<T> values)
    : shape_(std::move(shape)), data_(std::move(values)) {
    if (shape_product(shape_) != data_.size())
        throw std::invalid_argument("tensor: shape " + shape_str() + " does not match " +
                                    std::to_string(data_.size()) + " values");
}

template <typename T>
Tensor<T> Tensor<T>::full(std::vector<std::size_t> shape, T value) {
    Tensor t(std::move(shape));
    t.fill(value);
    return t;
}

template <typename T>
void Tensor<T>::fill(T value) {
    for (auto& v : data_) v = value;
}

template <typename T>
bool Tensor<T>::all_finite() const {
    for (T v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

template <typename T>
Tensor<T> Tensor<T>::reshaped(std::vector<std::size_t> shape) const {
    if (shape_product(shape) != data_.size())
        throw std::invalid_argument("reshape: element count mismatch");
    return Tensor(std::move(shape), data_);
}

template <typename T>
std::string Tensor<T>::shape_str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < shape_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(shape_[i]);
    }
    return s + "]";
}

template class Tensor<float>;
template class Tensor<double>;

} // namespace aeroseg
