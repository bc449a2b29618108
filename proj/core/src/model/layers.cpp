#include "deepsc/model/layers.hpp"

#include "deepsc/error.hpp"
#include "deepsc/nn/init.hpp"

namespace deepsc::model {

using nn::Activation;
using nn::Tensor;

template <class T>
ConvLayer<T> ConvLayer<T>::make(std::size_t k, std::size_t cin, std::size_t cout, Activation act, Rng& rng,
                                const std::string& name) {
  ConvLayer layer;
  layer.kernel = nn::variance_scaling_parameter<T>({k, k, cin, cout}, k * k * cin, rng, name + ".kernel");
  layer.bias = Tensor<T>::parameter({cout}, std::vector<T>(cout, T(0)), name + ".bias");
  layer.act = act;
  layer.k = k;
  layer.cin = cin;
  layer.cout = cout;
  return layer;
}

template <class T>
Tensor<T> ConvLayer<T>::forward(const Tensor<T>& x) const {
  auto y = nn::conv2d(x, kernel, bias);
  return act == Activation::None ? y : nn::activation(y, act);
}

template <class T>
DenseLayer<T> DenseLayer<T>::make(std::size_t in, std::size_t out, Activation act, Rng& rng, const std::string& name) {
  DenseLayer layer;
  layer.weight = nn::variance_scaling_parameter<T>({in, out}, in, rng, name + ".weight");
  layer.bias = Tensor<T>::parameter({out}, std::vector<T>(out, T(0)), name + ".bias");
  layer.act = act;
  return layer;
}

template <class T>
Tensor<T> DenseLayer<T>::forward(const Tensor<T>& x) const {
  auto y = nn::dense(x, weight, bias);
  return act == Activation::None ? y : nn::activation(y, act);
}

void SeResNetConfig::validate() const {
  if (split_branches == 0 || split_filters == 0 || transition_filters == 0 || kernel == 0)
    throw InvalidArgument("SE-ResNet: sizes must be positive");
  if (kernel % 2 == 0) throw InvalidArgument("SE-ResNet: kernel must be odd");
  if (se_reduction == 0 || transition_filters % se_reduction != 0)
    throw InvalidArgument("SE-ResNet: reduction must divide the channel count");
}

template <class T>
SeResNetBlock<T>::SeResNetBlock(const SeResNetConfig& cfg, std::size_t in_channels, Rng& rng,
                                const std::string& prefix)
    : cfg_(cfg), in_channels_(in_channels) {
  cfg.validate();
  if (in_channels == 0) throw InvalidArgument("SE-ResNet: in_channels must be positive");
  for (std::size_t i = 0; i < cfg.split_branches; ++i)
    splits_.push_back(ConvLayer<T>::make(cfg.kernel, in_channels, cfg.split_filters, Activation::ReLU, rng,
                                         prefix + ".split" + std::to_string(i)));
  const std::size_t c = cfg.out_channels();
  transition_ = ConvLayer<T>::make(1, cfg.split_branches * cfg.split_filters, c, cfg.transition_activation, rng,
                                   prefix + ".transition");
  squeeze_ = DenseLayer<T>::make(c, c / cfg.se_reduction, Activation::ReLU, rng, prefix + ".se_squeeze");
  excite_ = DenseLayer<T>::make(c / cfg.se_reduction, c, Activation::Sigmoid, rng, prefix + ".se_excite");
  has_projection_ = cfg.residual && in_channels != c;
  if (has_projection_)
    projection_ = ConvLayer<T>::make(1, in_channels, c, Activation::None, rng, prefix + ".projection");
}

template <class T>
Tensor<T> SeResNetBlock<T>::forward(const Tensor<T>& x) const {
  // The branches share their input, so one conv over the stacked kernels
  // equals running them separately and concatenating the outputs.
  Tensor<T> kernel = splits_[0].kernel, bias = splits_[0].bias;
  for (std::size_t i = 1; i < splits_.size(); ++i) {
    kernel = nn::concat_channels(kernel, splits_[i].kernel);
    bias = nn::concat_channels(bias, splits_[i].bias);
  }
  const Tensor<T> joined = nn::relu(nn::conv2d(x, kernel, bias));
  const Tensor<T> p = transition_.forward(joined);
  const std::size_t batch = p.shape()[0];
  const std::size_t c = p.shape()[3];

  Tensor<T> gates;
  if (unit_gates_) {
    gates = Tensor<T>::from({batch, c}, std::vector<T>(batch * c, T(1)));
  } else {
    const auto pooled = nn::reshape(nn::global_avg_pool(p), {batch, c});
    gates = excite_.forward(squeeze_.forward(pooled));
  }
  last_gates_.assign(gates.values().begin(), gates.values().end());

  Tensor<T> out = nn::scale_channels(p, gates);
  if (cfg_.residual) out = nn::residual_add(out, has_projection_ ? projection_.forward(x) : x);
  return out;
}

template <class T>
std::vector<Tensor<T>> SeResNetBlock<T>::parameters() const {
  std::vector<Tensor<T>> out;
  for (const auto& s : splits_) s.collect(out);
  transition_.collect(out);
  squeeze_.collect(out);
  excite_.collect(out);
  if (has_projection_) projection_.collect(out);
  return out;
}

template struct ConvLayer<float>;
template struct ConvLayer<double>;
template struct DenseLayer<float>;
template struct DenseLayer<double>;
template class SeResNetBlock<float>;
template class SeResNetBlock<double>;

}  // namespace deepsc::model
