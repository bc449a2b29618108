#pragma once

#include <functional>
#include <span>

#include "deepsc/nn/tensor.hpp"

namespace deepsc::nn {

enum class Activation { None, ReLU, Sigmoid };

/// Stride-1 "same" 2-D cross-correlation in NHWC layout.
/// input B x H x W x Cin, kernel K x K x Cin x Cout (K odd), bias Cout.
template <class T>
Tensor<T> conv2d(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias);

/// input B x Cin, weight Cin x Cout, bias Cout.
template <class T>
Tensor<T> dense(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias);

/// ReLU uses a zero subgradient at exactly 0.
template <class T>
Tensor<T> activation(const Tensor<T>& input, Activation kind);
template <class T>
Tensor<T> relu(const Tensor<T>& input) {
  return activation(input, Activation::ReLU);
}
template <class T>
Tensor<T> sigmoid(const Tensor<T>& input) {
  return activation(input, Activation::Sigmoid);
}

/// B x H x W x C -> B x 1 x 1 x C spatial mean.
template <class T>
Tensor<T> global_avg_pool(const Tensor<T>& input);

/// Multiplies every spatial position of channel c in batch item b by gates[b, c].
template <class T>
Tensor<T> scale_channels(const Tensor<T>& input, const Tensor<T>& gates);

/// Concatenation along the last (channel) axis.
template <class T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b);

template <class T>
Tensor<T> residual_add(const Tensor<T>& a, const Tensor<T>& b);

/// Same values, new shape; element order is preserved.
template <class T>
Tensor<T> reshape(const Tensor<T>& input, Shape shape);

/// Mean squared error over all elements (per-sequence mean, averaged over the
/// batch), accumulated in double. Returns a one-element tensor.
template <class T>
Tensor<T> mse_loss(const Tensor<T>& target, const Tensor<T>& estimate);

/// Treats each batch item (leading axis) as interleaved (re, im) pairs and
/// rescales it to unit mean squared complex magnitude. Differentiable.
template <class T>
Tensor<T> unit_power(const Tensor<T>& input);

/// y = transform(x) in the forward pass, identity Jacobian in the backward pass.
/// Used for the equalized channel, where y = (h x + w) / h.
template <class T>
Tensor<T> pass_through(const Tensor<T>& input, const std::function<void(std::span<const T>, std::span<T>)>& transform);

}  // namespace deepsc::nn
