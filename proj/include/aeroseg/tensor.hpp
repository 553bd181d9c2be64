#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace aeroseg {

// Dense row-major n-d array. float is the working precision, double the
// verification precision; the network code is templated on both.
template <typename T>
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape);
    Tensor(std::vector<std::size_t> shape, std::vector<T> values);

    static Tensor zeros(std::vector<std::size_t> shape) { return Tensor(std::move(shape)); }
    static Tensor full(std::vector<std::size_t> shape, T value);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t dim(std::size_t i) const { return shape_[i]; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    std::vector<T>& values() { return data_; }
    const std::vector<T>& values() const { return data_; }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    // [B,C,H,W] indexing
    T& at4(std::size_t b, std::size_t c, std::size_t h, std::size_t w) {
        return data_[((b * shape_[1] + c) * shape_[2] + h) * shape_[3] + w];
    }
    const T& at4(std::size_t b, std::size_t c, std::size_t h, std::size_t w) const {
        return data_[((b * shape_[1] + c) * shape_[2] + h) * shape_[3] + w];
    }
    // [B,F] indexing
    T& at2(std::size_t b, std::size_t f) { return data_[b * shape_[1] + f]; }
    const T& at2(std::size_t b, std::size_t f) const { return data_[b * shape_[1] + f]; }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
    void fill(T value);
    bool all_finite() const;

    // flat view with a new shape of identical element count
    Tensor reshaped(std::vector<std::size_t> shape) const;

    template <typename U>
    Tensor<U> cast() const {
        if (shape_.empty() && data_.empty()) return Tensor<U>();
        std::vector<U> out(data_.size());
        for (std::size_t i = 0; i < data_.size(); ++i) out[i] = static_cast<U>(data_[i]);
        return Tensor<U>(shape_, std::move(out));
    }

    std::string shape_str() const;

private:
    std::vector<std::size_t> shape_;
    std::vector<T> data_;
};

std::size_t shape_product(const std::vector<std::size_t>& shape);

using TensorF = Tensor<float>;
using TensorD = Tensor<double>;

} // namespace aeroseg
