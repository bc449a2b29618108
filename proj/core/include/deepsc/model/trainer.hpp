#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "deepsc/classic.hpp"
#include "deepsc/metrics.hpp"
#include "deepsc/model/transceiver.hpp"
#include "deepsc/pesq.hpp"

namespace deepsc::model {

struct TrainConfig {
  channel::ChannelKind channel = channel::ChannelKind::rician();
  double snr_db = 8.0;
  /// Skip the channel entirely (back-to-back feature codec training).
  bool noiseless = false;
  std::size_t epochs = 30;
  std::size_t batch_size = 16;
  /// Sequences per forward/backward pass; gradients accumulate up to a batch.
  std::size_t micro_batch = 4;
  double learning_rate = 1e-3;
  double momentum = 0.0;
  /// Joint gradient-norm limit; 0 disables clipping.
  double grad_clip = 0.0;
  bool early_stop = true;
  std::size_t plateau_epochs = 5;
  double plateau_tolerance = 1e-4;
  std::uint64_t seed = 42;

  void validate() const;
  void write(KeyValues& kv, const std::string& prefix = "train.") const;
  static TrainConfig read(const KeyValues& kv, const std::string& prefix = "train.");
};

struct TrainingRecord {
  channel::ChannelKind channel;
  double snr_db = 0.0;
  bool noiseless = false;
  std::size_t epochs = 0;
  std::uint64_t seed = 0;
  std::vector<double> epoch_loss;
  bool early_stopped = false;
};

struct ModelCheckpoint {
  TransceiverConfig config;
  TrainingRecord record;
  std::vector<nn::NamedTensor> parameters;
};

ModelCheckpoint make_checkpoint(const Transceiver<float>& model, TrainingRecord record);
/// Builds the model and loads the parameters, validating every shape.
Transceiver<float> instantiate(const ModelCheckpoint& ckpt);

std::string checkpoint_config_text(const ModelCheckpoint& ckpt);
void save_checkpoint(const std::filesystem::path& path, const ModelCheckpoint& ckpt);
ModelCheckpoint load_checkpoint(const std::filesystem::path& path);

using EpochCallback = std::function<void(std::size_t epoch, double loss)>;

/// Mini-batch SGD on the end-to-end MSE. Every sequence gets its own channel
/// draw and noise stream, derived from (seed, epoch, position), so results do
/// not depend on the micro-batch size. Throws InvalidArgument on an empty
/// dataset and NumericError on a non-finite loss.
ModelCheckpoint train(std::span<const SampleSequence> data, const TransceiverConfig& cfg, const TrainConfig& tc,
                      const EpochCallback& on_epoch = {});
/// Continues from an existing model (its parameters are updated in place).
TrainingRecord train_model(Transceiver<float>& model, std::span<const SampleSequence> data, const TrainConfig& tc,
                           const EpochCallback& on_epoch = {});

/// Mean loss of one pass over `data` without updating anything.
double dataset_loss(const Transceiver<float>& model, std::span<const SampleSequence> data, const TrainConfig& tc,
                    std::uint64_t stream_tag);

struct EvalConfig {
  std::vector<channel::ChannelKind> channels = {channel::ChannelKind::awgn(), channel::ChannelKind::rayleigh(),
                                                channel::ChannelKind::rician()};
  std::vector<double> snrs_db = {-2, 0, 2, 4, 6, 8, 10, 12};
  std::uint64_t seed = 42;
  std::optional<PesqConfig> pesq;
};

/// One transmission of a sequence; the generator carries all randomness.
using SystemFn = std::function<SampleSequence(const SampleSequence&, const channel::ChannelKind&, double, Rng&)>;
using SampleCallback = std::function<void(const MetricRow&, std::size_t index, const SampleSequence& recovered)>;

/// Sweeps every (channel, SNR) pair; sequence i at point p uses its own
/// stream, so points are independent and reproducible.
MetricReport evaluate_system(const SystemFn& system, std::span<const SampleSequence> test, const EvalConfig& ec,
                             const SampleCallback& on_sample = {});

MetricReport evaluate(const ModelCheckpoint& ckpt, std::span<const SampleSequence> test, const EvalConfig& ec,
                      const SampleCallback& on_sample = {});

SystemFn deepsc_system(const Transceiver<float>& model);
SystemFn classic_system(const classic::ClassicConfig& cfg);
/// Feature codec around the classic chain: features are peak-normalized
/// (the peak travels as error-free side information), PCM coded, sent,
/// rescaled and decoded.
SystemFn semi_traditional_system(const Transceiver<float>& codec, const classic::ClassicConfig& cfg);

}  // namespace deepsc::model
