#include "aeroseg/nn/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace aeroseg::nn {

template <typename T>
LossReport<T> cross_entropy_loss(const Tensor<T>& pred, const Tensor<T>& target) {
    if (!pred.same_shape(target))
        throw std::invalid_argument("cross_entropy_loss: pred " + pred.shape_str() + " vs target " +
                                    target.shape_str());
    LossReport<T> report;
    report.grad = Tensor<T>(pred.shape());
    double sum = 0.0, comp = 0.0; // Kahan
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double m = static_cast<double>(target[i]);
        if (m != 0.0 && m != 1.0)
            throw std::invalid_argument("cross_entropy_loss: target value " + std::to_string(m) +
                                        " is not binary");
        const double p = static_cast<double>(pred[i]);
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("cross_entropy_loss: pred value outside (0,1)");
        const double term = -(m * std::log(p) + (1.0 - m) * std::log1p(-p));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        report.grad[i] = static_cast<T>(-m / p + (1.0 - m) / (1.0 - p));
    }
    report.value = sum;
    return report;
}

template LossReport<float> cross_entropy_loss<float>(const Tensor<float>&, const Tensor<float>&);
template LossReport<double> cross_entropy_loss<double>(const Tensor<double>&, const Tensor<double>&);

} // namespace aeroseg::nn
