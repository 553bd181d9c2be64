#pragma once

#include "aeroseg/nn/network.hpp"
#include "aeroseg/util/rng.hpp"

namespace aeroseg::nn {

// Central-difference check of the analytic parameter gradient under the
// cross-entropy loss, double precision only. Samples at least
// `samples_per_layer` parameters from every parameterised layer (all of them
// when a layer is smaller than that) and returns the worst relative error
// |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
//
// Activations up to the perturbed layer are reused from a baseline forward,
// which keeps the cost proportional to the tail of the network.
double grad_check(Network<double>& net, const Tensor<double>* local, const Tensor<double>* global,
                  const Tensor<double>& target, double epsilon, Rng& rng,
                  std::size_t samples_per_layer = 200);

} // namespace aeroseg::nn
