#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "deepsc/nn/tensor.hpp"

namespace deepsc::nn {

struct OptimizerState {
  double learning_rate = 1e-3;
  /// Heavy-ball momentum; 0 gives the plain update theta <- theta - lr * grad.
  double momentum = 0.0;
  std::uint64_t iteration = 0;
  std::vector<std::vector<double>> velocity;
};

/// One gradient step over every parameter. Throws InvalidArgument when a
/// parameter has no gradient buffer (no backward pass reached it).
template <class T>
void sgd_step(std::span<Tensor<T>> params, OptimizerState& state);

/// Rescales all gradients so their joint L2 norm is at most `max_norm`;
/// returns the norm before scaling.
template <class T>
double clip_grad_norm(std::span<Tensor<T>> params, double max_norm);

template <class T>
double grad_norm(std::span<const Tensor<T>> params);

template <class T>
void zero_grad(std::span<Tensor<T>> params) {
  for (auto& p : params) p.zero_grad();
}

}  // namespace deepsc::nn
