#include "deepsc/model/transceiver.hpp"

#include <algorithm>
#include <map>

#include "deepsc/error.hpp"
#include "deepsc/nn/ops.hpp"

namespace deepsc::model {

using nn::Activation;
using nn::Tensor;

std::string to_string(Variant v) {
  switch (v) {
    case Variant::DeepScS: return "deepsc-s";
    case Variant::CnnOnly: return "cnn-only";
    case Variant::FeatureCodec: return "feature-codec";
  }
  return "?";
}

Variant parse_variant(std::string_view text) {
  if (text == "deepsc-s") return Variant::DeepScS;
  if (text == "cnn-only") return Variant::CnnOnly;
  if (text == "feature-codec") return Variant::FeatureCodec;
  throw InvalidArgument("unknown model variant '" + std::string(text) + "'");
}

std::string to_string(Group g) {
  switch (g) {
    case Group::Alpha: return "alpha";
    case Group::Beta: return "beta";
    case Group::Chi: return "chi";
    case Group::Delta: return "delta";
  }
  return "?";
}

TransceiverConfig TransceiverConfig::telephone(Variant v) {
  TransceiverConfig cfg;
  cfg.variant = v;
  return cfg;
}

TransceiverConfig TransceiverConfig::multimedia(Variant v) {
  TransceiverConfig cfg;
  cfg.variant = v;
  cfg.channel_filters = 16;
  return cfg;
}

void TransceiverConfig::validate() const {
  if (frames == 0 || frame_len == 0) throw InvalidArgument("transceiver: frame dims must be positive");
  if (kernel % 2 == 0) throw InvalidArgument("transceiver: kernel must be odd");
  if (channel_filters == 0 || (frames * frame_len * channel_filters) % 2 != 0)
    throw InvalidArgument("transceiver: channel values must pair into complex symbols");
  if (feature_depth == 0) throw InvalidArgument("transceiver: feature depth must be positive");
  if (variant == Variant::DeepScS) {
    se.validate();
    if (se.out_channels() != feature_depth)
      throw InvalidArgument("transceiver: SE-ResNet output must equal the feature depth");
    if (n_se_blocks == 0) throw InvalidArgument("transceiver: need at least one SE-ResNet block");
  }
  if (variant == Variant::CnnOnly && n_se_blocks == 0) throw InvalidArgument("transceiver: need at least one conv");
  if (variant == Variant::FeatureCodec && codec_convs == 0)
    throw InvalidArgument("transceiver: need at least one codec conv");
}

namespace {

std::string act_name(Activation a) {
  switch (a) {
    case Activation::None: return "none";
    case Activation::ReLU: return "relu";
    case Activation::Sigmoid: return "sigmoid";
  }
  return "?";
}

Activation parse_act(const std::string& s) {
  if (s == "none") return Activation::None;
  if (s == "relu") return Activation::ReLU;
  if (s == "sigmoid") return Activation::Sigmoid;
  throw FormatError("unknown activation '" + s + "'");
}

}  // namespace

void TransceiverConfig::write(KeyValues& kv, const std::string& p) const {
  kv.set(p + "variant", to_string(variant));
  kv.set(p + "frames", static_cast<unsigned long long>(frames));
  kv.set(p + "frame_len", static_cast<unsigned long long>(frame_len));
  kv.set(p + "kernel", static_cast<unsigned long long>(kernel));
  kv.set(p + "feature_depth", static_cast<unsigned long long>(feature_depth));
  kv.set(p + "channel_filters", static_cast<unsigned long long>(channel_filters));
  kv.set(p + "se_blocks", static_cast<unsigned long long>(n_se_blocks));
  kv.set(p + "codec_convs", static_cast<unsigned long long>(codec_convs));
  kv.set(p + "se.split_branches", static_cast<unsigned long long>(se.split_branches));
  kv.set(p + "se.split_filters", static_cast<unsigned long long>(se.split_filters));
  kv.set(p + "se.kernel", static_cast<unsigned long long>(se.kernel));
  kv.set(p + "se.transition_filters", static_cast<unsigned long long>(se.transition_filters));
  kv.set(p + "se.reduction", static_cast<unsigned long long>(se.se_reduction));
  kv.set(p + "se.residual", se.residual);
  kv.set(p + "se.transition_activation", act_name(se.transition_activation));
}

TransceiverConfig TransceiverConfig::read(const KeyValues& kv, const std::string& p) {
  TransceiverConfig c;
  c.variant = parse_variant(kv.get_string(p + "variant", to_string(c.variant)));
  c.frames = kv.get_uint(p + "frames", c.frames);
  c.frame_len = kv.get_uint(p + "frame_len", c.frame_len);
  c.kernel = kv.get_uint(p + "kernel", c.kernel);
  c.feature_depth = kv.get_uint(p + "feature_depth", c.feature_depth);
  c.channel_filters = kv.get_uint(p + "channel_filters", c.channel_filters);
  c.n_se_blocks = kv.get_uint(p + "se_blocks", c.n_se_blocks);
  c.codec_convs = kv.get_uint(p + "codec_convs", c.codec_convs);
  c.se.split_branches = kv.get_uint(p + "se.split_branches", c.se.split_branches);
  c.se.split_filters = kv.get_uint(p + "se.split_filters", c.se.split_filters);
  c.se.kernel = kv.get_uint(p + "se.kernel", c.se.kernel);
  c.se.transition_filters = kv.get_uint(p + "se.transition_filters", c.se.transition_filters);
  c.se.se_reduction = kv.get_uint(p + "se.reduction", c.se.se_reduction);
  c.se.residual = kv.get_bool(p + "se.residual", c.se.residual);
  c.se.transition_activation =
      parse_act(kv.get_string(p + "se.transition_activation", act_name(c.se.transition_activation)));
  c.validate();
  return c;
}

namespace {

void add_block_specs(std::vector<LayerSpec>& out, const SeResNetConfig& se, std::size_t cin, Group g,
                     const std::string& prefix) {
  const std::size_t c = se.out_channels();
  for (std::size_t i = 0; i < se.split_branches; ++i)
    out.push_back({prefix + ".split" + std::to_string(i), g, cin, se.split_filters, se.kernel, false, false});
  out.push_back({prefix + ".transition", g, se.split_branches * se.split_filters, c, 1, false, false});
  out.push_back({prefix + ".se_squeeze", g, c, c / se.se_reduction, 1, true, true});
  out.push_back({prefix + ".se_excite", g, c / se.se_reduction, c, 1, true, true});
  if (se.residual && cin != c) out.push_back({prefix + ".projection", g, cin, c, 1, false, true});
}

}  // namespace

std::vector<LayerSpec> layer_inventory(const TransceiverConfig& cfg) {
  cfg.validate();
  std::vector<LayerSpec> out;
  const std::size_t k = cfg.kernel, d = cfg.feature_depth, cf = cfg.channel_filters;
  const std::size_t hidden = cfg.variant == Variant::FeatureCodec ? cfg.codec_convs : cfg.n_se_blocks;
  auto conv = [&](std::string name, Group g, std::size_t cin, std::size_t cout, std::size_t kk) {
    out.push_back({std::move(name), g, cin, cout, kk, false, false});
  };

  std::size_t cin = 1;
  for (std::size_t i = 0; i < hidden; ++i) {
    const std::string name = "alpha." + std::string(cfg.variant == Variant::DeepScS ? "block" : "conv") + std::to_string(i);
    if (cfg.variant == Variant::DeepScS)
      add_block_specs(out, cfg.se, cin, Group::Alpha, name);
    else
      conv(name, Group::Alpha, cin, d, k);
    cin = d;
  }
  conv("beta.conv", Group::Beta, d, cf, k);
  conv("chi.conv", Group::Chi, cf, cf, k);
  cin = cf;
  for (std::size_t i = 0; i < hidden; ++i) {
    const std::string name = "delta." + std::string(cfg.variant == Variant::DeepScS ? "block" : "conv") + std::to_string(i);
    if (cfg.variant == Variant::DeepScS)
      add_block_specs(out, cfg.se, cin, Group::Delta, name);
    else
      conv(name, Group::Delta, cin, d, k);
    cin = d;
  }
  conv("delta.last", Group::Delta, d, 1, k);
  return out;
}

template <class T>
Transceiver<T>::Transceiver(const TransceiverConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  cfg.validate();
  Rng rng(seed);
  const std::size_t k = cfg.kernel, d = cfg.feature_depth, cf = cfg.channel_filters;
  const bool se = cfg.variant == Variant::DeepScS;
  const std::size_t hidden = cfg.variant == Variant::FeatureCodec ? cfg.codec_convs : cfg.n_se_blocks;

  std::size_t cin = 1;
  for (std::size_t i = 0; i < hidden; ++i, cin = d) {
    if (se)
      enc_blocks_.emplace_back(cfg.se, cin, rng, "alpha.block" + std::to_string(i));
    else
      enc_convs_.push_back(ConvLayer<T>::make(k, cin, d, Activation::ReLU, rng, "alpha.conv" + std::to_string(i)));
  }
  channel_enc_ = ConvLayer<T>::make(k, d, cf, Activation::None, rng, "beta.conv");
  channel_dec_ = ConvLayer<T>::make(k, cf, cf, Activation::ReLU, rng, "chi.conv");
  cin = cf;
  for (std::size_t i = 0; i < hidden; ++i, cin = d) {
    if (se)
      dec_blocks_.emplace_back(cfg.se, cin, rng, "delta.block" + std::to_string(i));
    else
      dec_convs_.push_back(ConvLayer<T>::make(k, cin, d, Activation::ReLU, rng, "delta.conv" + std::to_string(i)));
  }
  last_ = ConvLayer<T>::make(k, d, 1, Activation::None, rng, "delta.last");
}

namespace {

void check_input(const nn::Shape& s, const TransceiverConfig& cfg, std::size_t channels, const char* what) {
  if (s.size() != 4 || s[1] != cfg.frames || s[2] != cfg.frame_len || s[3] != channels)
    throw InvalidArgument(std::string(what) + ": expected B x " + std::to_string(cfg.frames) + " x " +
                          std::to_string(cfg.frame_len) + " x " + std::to_string(channels) + ", got " +
                          nn::to_string(s));
}

}  // namespace

template <class T>
Tensor<T> Transceiver<T>::semantic_encode(const Tensor<T>& m) const {
  check_input(m.shape(), cfg_, 1, "semantic_encode");
  Tensor<T> x = m;
  for (const auto& b : enc_blocks_) x = b.forward(x);
  for (const auto& c : enc_convs_) x = c.forward(x);
  return x;
}

template <class T>
Tensor<T> Transceiver<T>::channel_encode(const Tensor<T>& b) const {
  check_input(b.shape(), cfg_, cfg_.feature_depth, "channel_encode");
  auto u = channel_enc_.forward(b);
  return cfg_.variant == Variant::FeatureCodec ? u : nn::unit_power(u);
}

template <class T>
Tensor<T> Transceiver<T>::channel_decode(const Tensor<T>& y) const {
  check_input(y.shape(), cfg_, cfg_.channel_filters, "channel_decode");
  return channel_dec_.forward(y);
}

template <class T>
Tensor<T> Transceiver<T>::semantic_decode(const Tensor<T>& b_hat) const {
  check_input(b_hat.shape(), cfg_, cfg_.channel_filters, "semantic_decode");
  Tensor<T> x = b_hat;
  for (const auto& b : dec_blocks_) x = b.forward(x);
  for (const auto& c : dec_convs_) x = c.forward(x);
  return last_.forward(x);
}

template <class T>
Tensor<T> Transceiver<T>::forward(const Tensor<T>& m, std::span<const channel::ChannelRealization> channel,
                                  std::span<Rng> noise) const {
  auto x = channel_encode(semantic_encode(m));
  if (!channel.empty()) x = channel_layer(x, channel, noise);
  return semantic_decode(channel_decode(x));
}

template <class T>
std::vector<Tensor<T>> Transceiver<T>::parameters(Group g) const {
  std::vector<Tensor<T>> out;
  switch (g) {
    case Group::Alpha:
      for (const auto& b : enc_blocks_) {
        auto p = b.parameters();
        out.insert(out.end(), p.begin(), p.end());
      }
      for (const auto& c : enc_convs_) c.collect(out);
      break;
    case Group::Beta: channel_enc_.collect(out); break;
    case Group::Chi: channel_dec_.collect(out); break;
    case Group::Delta:
      for (const auto& b : dec_blocks_) {
        auto p = b.parameters();
        out.insert(out.end(), p.begin(), p.end());
      }
      for (const auto& c : dec_convs_) c.collect(out);
      last_.collect(out);
      break;
  }
  return out;
}

template <class T>
std::vector<Tensor<T>> Transceiver<T>::parameters() const {
  std::vector<Tensor<T>> out;
  for (Group g : {Group::Alpha, Group::Beta, Group::Chi, Group::Delta}) {
    auto p = parameters(g);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

template <class T>
std::vector<nn::NamedTensor> Transceiver<T>::export_parameters() const {
  std::vector<nn::NamedTensor> out;
  for (const auto& p : parameters()) {
    nn::NamedTensor t{p.name(), p.shape(), {}};
    t.values.assign(p.values().begin(), p.values().end());
    out.push_back(std::move(t));
  }
  return out;
}

template <class T>
void Transceiver<T>::import_parameters(const std::vector<nn::NamedTensor>& tensors) {
  auto params = parameters();
  if (tensors.size() != params.size())
    throw FormatError("checkpoint holds " + std::to_string(tensors.size()) + " tensors, config expects " +
                      std::to_string(params.size()));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& t = tensors[i];
    if (t.name != params[i].name())
      throw FormatError("checkpoint tensor " + std::to_string(i) + " is '" + t.name + "', expected '" +
                        params[i].name() + "'");
    if (t.shape != params[i].shape())
      throw FormatError("checkpoint tensor '" + t.name + "' has shape " + nn::to_string(t.shape) + ", expected " +
                        nn::to_string(params[i].shape()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto dst = params[i].mutable_values();
    std::transform(tensors[i].values.begin(), tensors[i].values.end(), dst.begin(),
                   [](float v) { return static_cast<T>(v); });
  }
}

template <class T>
Tensor<T> channel_layer(const Tensor<T>& x, std::span<const channel::ChannelRealization> channel,
                        std::span<Rng> noise) {
  const std::size_t batch = x.shape().front();
  if (channel.size() != batch || noise.size() != batch)
    throw InvalidArgument("channel_layer: need one realization and one noise stream per batch item");
  const std::size_t per = x.size() / batch;
  if (per % 2 != 0) throw InvalidArgument("channel_layer: odd number of values per item");
  return nn::pass_through<T>(x, [&](std::span<const T> in, std::span<T> out) {
    std::vector<Complex> sym(per / 2);
    for (std::size_t b = 0; b < batch; ++b) {
      const T* src = in.data() + b * per;
      for (std::size_t i = 0; i < sym.size(); ++i) sym[i] = {double(src[2 * i]), double(src[2 * i + 1])};
      const auto y = channel::equalize(channel::transmit(sym, channel[b], noise[b]), channel[b]);
      T* dst = out.data() + b * per;
      for (std::size_t i = 0; i < y.size(); ++i) {
        dst[2 * i] = static_cast<T>(y[i].real());
        dst[2 * i + 1] = static_cast<T>(y[i].imag());
      }
    }
  });
}

template <class T>
Tensor<T> to_frames(std::span<const SampleSequence> batch, const TransceiverConfig& cfg) {
  const std::size_t n = cfg.samples_per_sequence();
  std::vector<T> values;
  values.reserve(batch.size() * n);
  for (const auto& s : batch) {
    if (s.size() != n)
      throw InvalidArgument("to_frames: sequence has " + std::to_string(s.size()) + " samples, expected " +
                            std::to_string(n));
    values.insert(values.end(), s.samples.begin(), s.samples.end());
  }
  return Tensor<T>::from({batch.size(), cfg.frames, cfg.frame_len, 1}, std::move(values));
}

template <class T>
SampleSequence from_frames(const Tensor<T>& m, std::size_t b, int rate) {
  const std::size_t n = m.size() / m.shape().front();
  SampleSequence s;
  s.rate = rate;
  s.samples.resize(n);
  const auto v = m.values().subspan(b * n, n);
  std::transform(v.begin(), v.end(), s.samples.begin(), [](T x) { return static_cast<float>(x); });
  return s;
}

#define DEEPSC_INSTANTIATE(T)                                                                            \
  template class Transceiver<T>;                                                                         \
  template Tensor<T> channel_layer(const Tensor<T>&, std::span<const channel::ChannelRealization>,     \
                                   std::span<Rng>);                                                      \
  template Tensor<T> to_frames<T>(std::span<const SampleSequence>, const TransceiverConfig&);           \
  template SampleSequence from_frames(const Tensor<T>&, std::size_t, int);

DEEPSC_INSTANTIATE(float)
DEEPSC_INSTANTIATE(double)

}  // namespace deepsc::model
