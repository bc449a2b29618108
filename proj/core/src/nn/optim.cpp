#include "deepsc/nn/optim.hpp"

#include <cmath>

#include "deepsc/error.hpp"

namespace deepsc::nn {

template <class T>
void sgd_step(std::span<Tensor<T>> params, OptimizerState& state) {
  if (!(state.learning_rate >= 0.0)) throw InvalidArgument("sgd_step: learning rate must be non-negative");
  for (const auto& p : params) {
    if (!p.has_grad()) throw InvalidArgument("sgd_step: parameter '" + p.name() + "' has no gradient");
  }
  if (state.momentum != 0.0 && state.velocity.size() != params.size()) {
    state.velocity.assign(params.size(), {});
    for (std::size_t i = 0; i < params.size(); ++i) state.velocity[i].assign(params[i].size(), 0.0);
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto values = params[i].mutable_values();
    const auto grad = params[i].grad();
    if (state.momentum == 0.0) {
      for (std::size_t j = 0; j < values.size(); ++j)
        values[j] = static_cast<T>(values[j] - state.learning_rate * grad[j]);
    } else {
      auto& v = state.velocity[i];
      for (std::size_t j = 0; j < values.size(); ++j) {
        v[j] = state.momentum * v[j] + grad[j];
        values[j] = static_cast<T>(values[j] - state.learning_rate * v[j]);
      }
    }
  }
  ++state.iteration;
}

template <class T>
double grad_norm(std::span<const Tensor<T>> params) {
  double acc = 0.0;
  for (const auto& p : params)
    for (T g : p.grad()) acc += static_cast<double>(g) * g;
  return std::sqrt(acc);
}

template <class T>
double clip_grad_norm(std::span<Tensor<T>> params, double max_norm) {
  const double norm = grad_norm<T>(std::span<const Tensor<T>>(params.data(), params.size()));
  if (max_norm > 0.0 && norm > max_norm) {
    const double s = max_norm / norm;
    for (auto& p : params)
      for (T& g : p.mutable_grad()) g = static_cast<T>(g * s);
  }
  return norm;
}

template void sgd_step<float>(std::span<Tensor<float>>, OptimizerState&);
template void sgd_step<double>(std::span<Tensor<double>>, OptimizerState&);
template double clip_grad_norm<float>(std::span<Tensor<float>>, double);
template double clip_grad_norm<double>(std::span<Tensor<double>>, double);
template double grad_norm<float>(std::span<const Tensor<float>>);
template double grad_norm<double>(std::span<const Tensor<double>>);

}  // namespace deepsc::nn
