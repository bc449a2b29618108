#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deepsc/channel.hpp"
#include "deepsc/keyvalue.hpp"
#include "deepsc/model/layers.hpp"
#include "deepsc/nn/checkpoint.hpp"
#include "deepsc/rng.hpp"

namespace deepsc::model {

enum class Variant { DeepScS, CnnOnly, FeatureCodec };

/// "deepsc-s", "cnn-only", "feature-codec".
std::string to_string(Variant v);
Variant parse_variant(std::string_view text);

/// Parameter groups: semantic encoder, channel encoder, channel decoder,
/// semantic decoder.
enum class Group { Alpha, Beta, Chi, Delta };
std::string to_string(Group g);

struct TransceiverConfig {
  Variant variant = Variant::DeepScS;
  std::size_t n_se_blocks = 6;
  std::size_t channel_filters = 8;
  std::size_t frames = 128;
  std::size_t frame_len = 128;
  std::size_t kernel = 5;
  /// Channel depth D of the semantic features.
  std::size_t feature_depth = 32;
  /// 32-filter convs in each half of the feature codec.
  std::size_t codec_convs = 4;
  SeResNetConfig se;

  static TransceiverConfig telephone(Variant v = Variant::DeepScS);
  static TransceiverConfig multimedia(Variant v = Variant::DeepScS);

  std::size_t samples_per_sequence() const { return frames * frame_len; }
  /// Real values sent per sequence (two per complex symbol).
  std::size_t channel_values() const { return frames * frame_len * channel_filters; }
  std::size_t symbols_per_sequence() const { return channel_values() / 2; }

  void validate() const;
  void write(KeyValues& kv, const std::string& prefix = "model.") const;
  static TransceiverConfig read(const KeyValues& kv, const std::string& prefix = "model.");
};

/// One trainable module as counted for complexity. Dense layers have kernel 1
/// and act on a 1 x 1 map.
struct LayerSpec {
  std::string name;
  Group group = Group::Alpha;
  std::size_t cin = 0;
  std::size_t cout = 0;
  std::size_t kernel = 1;
  bool dense = false;
  /// Residual projections and SE dense layers; kept out of headline counts.
  bool extra = false;
};

/// Every conv and dense module of the variant, in parameter order.
std::vector<LayerSpec> layer_inventory(const TransceiverConfig& cfg);

/// The neural transceiver. Tensors are NHWC with H = frames, W = frame_len.
///
/// DeepSC-S: m (B x F x L x 1) -> SE-ResNet blocks -> b (D channels)
///   -> linear conv -> unit power -> channel -> conv + ReLU
///   -> SE-ResNet blocks -> single-filter linear conv -> m_hat.
/// CNN-only swaps each block for a 32-filter conv + ReLU. The feature codec
/// uses plain convs and skips power normalization.
template <class T>
class Transceiver {
 public:
  Transceiver(const TransceiverConfig& cfg, std::uint64_t seed);

  const TransceiverConfig& config() const { return cfg_; }

  nn::Tensor<T> semantic_encode(const nn::Tensor<T>& m) const;
  /// B x F x L x channel_filters, unit power per item (except the feature codec).
  nn::Tensor<T> channel_encode(const nn::Tensor<T>& b) const;
  nn::Tensor<T> channel_decode(const nn::Tensor<T>& y) const;
  nn::Tensor<T> semantic_decode(const nn::Tensor<T>& b_hat) const;

  /// Full transmitter -> channel -> receiver graph. With no realizations the
  /// channel is the identity.
  nn::Tensor<T> forward(const nn::Tensor<T>& m, std::span<const channel::ChannelRealization> channel,
                        std::span<Rng> noise) const;

  std::vector<nn::Tensor<T>> parameters() const;
  std::vector<nn::Tensor<T>> parameters(Group g) const;

  std::vector<SeResNetBlock<T>>& encoder_blocks() { return enc_blocks_; }
  std::vector<SeResNetBlock<T>>& decoder_blocks() { return dec_blocks_; }

  std::vector<nn::NamedTensor> export_parameters() const;
  /// Throws FormatError unless names and shapes match this config exactly.
  void import_parameters(const std::vector<nn::NamedTensor>& tensors);

 private:
  TransceiverConfig cfg_;
  std::vector<SeResNetBlock<T>> enc_blocks_;
  std::vector<ConvLayer<T>> enc_convs_;
  ConvLayer<T> channel_enc_;
  ConvLayer<T> channel_dec_;
  std::vector<SeResNetBlock<T>> dec_blocks_;
  std::vector<ConvLayer<T>> dec_convs_;
  ConvLayer<T> last_;
};

/// Passes each batch item's interleaved (re, im) values through its own
/// realization: y = h x + w, then zero-forcing. Identity Jacobian.
template <class T>
nn::Tensor<T> channel_layer(const nn::Tensor<T>& x, std::span<const channel::ChannelRealization> channel,
                            std::span<Rng> noise);

/// B sequences of F*L samples -> B x F x L x 1.
template <class T>
nn::Tensor<T> to_frames(std::span<const SampleSequence> batch, const TransceiverConfig& cfg);
/// Item `b` of a B x F x L x 1 tensor as a sequence.
template <class T>
SampleSequence from_frames(const nn::Tensor<T>& m, std::size_t b, int rate);

}  // namespace deepsc::model
