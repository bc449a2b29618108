#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "deepsc/nn/ops.hpp"
#include "deepsc/nn/tensor.hpp"
#include "deepsc/rng.hpp"

namespace deepsc::model {

/// K x K conv with bias and an activation. Kernels use variance-scaling init
/// over fan_in = K*K*Cin; biases start at zero.
template <class T>
struct ConvLayer {
  nn::Tensor<T> kernel;
  nn::Tensor<T> bias;
  nn::Activation act = nn::Activation::None;
  std::size_t k = 1;
  std::size_t cin = 1;
  std::size_t cout = 1;

  static ConvLayer make(std::size_t k, std::size_t cin, std::size_t cout, nn::Activation act, Rng& rng,
                        const std::string& name);
  nn::Tensor<T> forward(const nn::Tensor<T>& x) const;
  void collect(std::vector<nn::Tensor<T>>& out) const {
    out.push_back(kernel);
    out.push_back(bias);
  }
};

template <class T>
struct DenseLayer {
  nn::Tensor<T> weight;
  nn::Tensor<T> bias;
  nn::Activation act = nn::Activation::None;

  static DenseLayer make(std::size_t in, std::size_t out, nn::Activation act, Rng& rng, const std::string& name);
  nn::Tensor<T> forward(const nn::Tensor<T>& x) const;
  void collect(std::vector<nn::Tensor<T>>& out) const {
    out.push_back(weight);
    out.push_back(bias);
  }
};

struct SeResNetConfig {
  std::size_t split_branches = 2;
  std::size_t split_filters = 16;
  std::size_t kernel = 5;
  std::size_t transition_filters = 32;
  std::size_t se_reduction = 4;
  bool residual = true;
  nn::Activation transition_activation = nn::Activation::None;

  std::size_t out_channels() const { return transition_filters; }
  /// Throws InvalidArgument on zero sizes, an even kernel, or a reduction
  /// that does not divide the channel count.
  void validate() const;
};

/// Split convs on a shared input, concatenated, 1x1 transition, channel
/// gating from a squeeze-excitation path, then a residual add. The residual
/// path is a 1x1 linear projection when in_channels differs from the output.
template <class T>
class SeResNetBlock {
 public:
  SeResNetBlock() = default;
  SeResNetBlock(const SeResNetConfig& cfg, std::size_t in_channels, Rng& rng, const std::string& prefix);

  nn::Tensor<T> forward(const nn::Tensor<T>& x) const;
  std::vector<nn::Tensor<T>> parameters() const;

  std::size_t in_channels() const { return in_channels_; }
  std::size_t out_channels() const { return cfg_.out_channels(); }
  bool has_projection() const { return has_projection_; }

  /// Replaces the learned gates with 1 (testing hook).
  void force_unit_gates(bool on) { unit_gates_ = on; }
  /// Gates from the most recent forward pass, B x C.
  const std::vector<T>& last_gates() const { return last_gates_; }

 private:
  SeResNetConfig cfg_;
  std::size_t in_channels_ = 0;
  std::vector<ConvLayer<T>> splits_;
  ConvLayer<T> transition_;
  DenseLayer<T> squeeze_;
  DenseLayer<T> excite_;
  ConvLayer<T> projection_;
  bool has_projection_ = false;
  bool unit_gates_ = false;
  mutable std::vector<T> last_gates_;
};

template <class T>
SeResNetBlock<T> build_se_resnet_block(const SeResNetConfig& cfg, std::size_t in_channels, std::uint64_t seed) {
  Rng rng(seed);
  return SeResNetBlock<T>(cfg, in_channels, rng, "block");
}

}  // namespace deepsc::model
