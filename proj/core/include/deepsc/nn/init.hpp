#pragma once

#include <vector>

#include "deepsc/nn/tensor.hpp"
#include "deepsc/rng.hpp"

namespace deepsc::nn {

/// Standard deviation of N(0,1) truncated to [-2, 2].
inline constexpr double kTruncatedNormalStd = 0.87962566103423978;

/// Truncated-normal draws (cut at two standard deviations) rescaled so the
/// empirical variance is 1/fan_in. Deterministic in the RNG state.
template <class T>
std::vector<T> variance_scaling_init(std::size_t count, std::size_t fan_in, Rng& rng);

template <class T>
Tensor<T> variance_scaling_parameter(Shape shape, std::size_t fan_in, Rng& rng, std::string name) {
  const std::size_t n = numel(shape);
  return Tensor<T>::parameter(std::move(shape), variance_scaling_init<T>(n, fan_in, rng), std::move(name));
}

}  // namespace deepsc::nn
