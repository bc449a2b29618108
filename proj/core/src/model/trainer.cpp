#include "deepsc/model/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "deepsc/error.hpp"
#include "deepsc/nn/ops.hpp"
#include "deepsc/nn/optim.hpp"

namespace deepsc::model {

namespace {

constexpr std::uint64_t kShuffleTag = 1;
constexpr std::uint64_t kTrainNoiseTag = 2;
constexpr std::uint64_t kEvalTag = 3;

std::uint64_t stream_id(std::uint64_t tag, std::uint64_t a, std::uint64_t b) {
  return (tag << 56) | ((a & 0xFFFFFFull) << 32) | (b & 0xFFFFFFFFull);
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs == 0) throw InvalidArgument("train: epochs must be positive");
  if (batch_size == 0 || micro_batch == 0) throw InvalidArgument("train: batch sizes must be positive");
  if (!(learning_rate >= 0.0) || !(momentum >= 0.0 && momentum < 1.0) || !(grad_clip >= 0.0))
    throw InvalidArgument("train: invalid optimizer settings");
}

void TrainConfig::write(KeyValues& kv, const std::string& p) const {
  kv.set(p + "channel", channel::to_string(channel));
  kv.set(p + "snr_db", snr_db);
  kv.set(p + "noiseless", noiseless);
  kv.set(p + "epochs", static_cast<unsigned long long>(epochs));
  kv.set(p + "batch_size", static_cast<unsigned long long>(batch_size));
  kv.set(p + "micro_batch", static_cast<unsigned long long>(micro_batch));
  kv.set(p + "learning_rate", learning_rate);
  kv.set(p + "momentum", momentum);
  kv.set(p + "grad_clip", grad_clip);
  kv.set(p + "early_stop", early_stop);
  kv.set(p + "plateau_epochs", static_cast<unsigned long long>(plateau_epochs));
  kv.set(p + "plateau_tolerance", plateau_tolerance);
  kv.set(p + "seed", static_cast<unsigned long long>(seed));
}

TrainConfig TrainConfig::read(const KeyValues& kv, const std::string& p) {
  TrainConfig t;
  t.channel = channel::parse_channel(kv.get_string(p + "channel", channel::to_string(t.channel)));
  t.snr_db = kv.get_double(p + "snr_db", t.snr_db);
  t.noiseless = kv.get_bool(p + "noiseless", t.noiseless);
  t.epochs = kv.get_uint(p + "epochs", t.epochs);
  t.batch_size = kv.get_uint(p + "batch_size", t.batch_size);
  t.micro_batch = kv.get_uint(p + "micro_batch", t.micro_batch);
  t.learning_rate = kv.get_double(p + "learning_rate", t.learning_rate);
  t.momentum = kv.get_double(p + "momentum", t.momentum);
  t.grad_clip = kv.get_double(p + "grad_clip", t.grad_clip);
  t.early_stop = kv.get_bool(p + "early_stop", t.early_stop);
  t.plateau_epochs = kv.get_uint(p + "plateau_epochs", t.plateau_epochs);
  t.plateau_tolerance = kv.get_double(p + "plateau_tolerance", t.plateau_tolerance);
  t.seed = kv.get_uint(p + "seed", t.seed);
  t.validate();
  return t;
}

ModelCheckpoint make_checkpoint(const Transceiver<float>& model, TrainingRecord record) {
  return {model.config(), std::move(record), model.export_parameters()};
}

Transceiver<float> instantiate(const ModelCheckpoint& ckpt) {
  Transceiver<float> model(ckpt.config, 0);
  model.import_parameters(ckpt.parameters);
  return model;
}

std::string checkpoint_config_text(const ModelCheckpoint& ckpt) {
  KeyValues kv;
  kv.set("format", std::string("deepsc-checkpoint/1"));
  ckpt.config.write(kv);
  const auto& r = ckpt.record;
  kv.set("record.channel", channel::to_string(r.channel));
  kv.set("record.snr_db", r.snr_db);
  kv.set("record.noiseless", r.noiseless);
  kv.set("record.epochs", static_cast<unsigned long long>(r.epochs));
  kv.set("record.seed", static_cast<unsigned long long>(r.seed));
  kv.set("record.early_stopped", r.early_stopped);
  std::string losses;
  for (std::size_t i = 0; i < r.epoch_loss.size(); ++i) losses += (i ? "," : "") + format_double(r.epoch_loss[i]);
  kv.set("record.epoch_loss", losses);
  return kv.to_string();
}

void save_checkpoint(const std::filesystem::path& path, const ModelCheckpoint& ckpt) {
  nn::write_checkpoint(path, {checkpoint_config_text(ckpt), ckpt.parameters});
}

ModelCheckpoint load_checkpoint(const std::filesystem::path& path) {
  auto data = nn::read_checkpoint(path);
  const auto kv = KeyValues::parse(data.config);
  if (kv.get_string("format") != "deepsc-checkpoint/1")
    throw FormatError("checkpoint: unsupported config format '" + kv.get_string("format") + "'");
  ModelCheckpoint ckpt;
  ckpt.config = TransceiverConfig::read(kv);
  auto& r = ckpt.record;
  r.channel = channel::parse_channel(kv.get_string("record.channel"));
  r.snr_db = kv.get_double("record.snr_db");
  r.noiseless = kv.get_bool("record.noiseless", false);
  r.epochs = kv.get_uint("record.epochs");
  r.seed = kv.get_uint("record.seed");
  r.early_stopped = kv.get_bool("record.early_stopped", false);
  for (const auto& s : split_list(kv.get_string("record.epoch_loss", ""))) r.epoch_loss.push_back(std::stod(s));
  ckpt.parameters = std::move(data.tensors);
  // Shape audit happens here so a bad file never reaches a caller.
  (void)instantiate(ckpt);
  return ckpt;
}

namespace {

/// Forward + loss for sequences [first, first + n) of `order`.
nn::Tensor<float> chunk_loss(const Transceiver<float>& model, std::span<const SampleSequence> data,
                             std::span<const std::size_t> idx, const TrainConfig& tc, std::uint64_t tag,
                             std::uint64_t epoch, std::size_t position) {
  std::vector<SampleSequence> batch;
  batch.reserve(idx.size());
  for (auto i : idx) batch.push_back(data[i]);
  const auto m = to_frames<float>(batch, model.config());

  std::vector<channel::ChannelRealization> reals;
  std::vector<Rng> noise;
  if (!tc.noiseless) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      Rng rng(tc.seed, stream_id(tag, epoch, position + j));
      reals.push_back(channel::realize(tc.channel, tc.snr_db, rng));
      noise.push_back(rng);
    }
  }
  const auto out = model.forward(m, reals, noise);
  return nn::mse_loss(m, out);
}

}  // namespace

double dataset_loss(const Transceiver<float>& model, std::span<const SampleSequence> data, const TrainConfig& tc,
                    std::uint64_t stream_tag) {
  if (data.empty()) throw InvalidArgument("dataset_loss: empty dataset");
  nn::NoGradGuard guard;
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); i += tc.micro_batch) {
    const std::size_t n = std::min(tc.micro_batch, data.size() - i);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), i);
    total += chunk_loss(model, data, idx, tc, kTrainNoiseTag, stream_tag, i).item() * static_cast<double>(n);
  }
  return total / static_cast<double>(data.size());
}

TrainingRecord train_model(Transceiver<float>& model, std::span<const SampleSequence> data, const TrainConfig& tc,
                           const EpochCallback& on_epoch) {
  tc.validate();
  if (data.empty()) throw InvalidArgument("train: empty dataset");
  const std::size_t n = model.config().samples_per_sequence();
  for (const auto& s : data)
    if (s.size() != n)
      throw InvalidArgument("train: every sequence must hold " + std::to_string(n) + " samples, got " +
                            std::to_string(s.size()));

  TrainingRecord record;
  record.channel = tc.channel;
  record.snr_db = tc.snr_db;
  record.noiseless = tc.noiseless;
  record.seed = tc.seed;

  auto params = model.parameters();
  nn::OptimizerState opt;
  opt.learning_rate = tc.learning_rate;
  opt.momentum = tc.momentum;

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < tc.epochs; ++epoch) {
    Rng shuffle(tc.seed, stream_id(kShuffleTag, epoch, 0));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle.below(i)]);

    double epoch_total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += tc.batch_size) {
      const std::size_t bn = std::min(tc.batch_size, order.size() - start);
      nn::zero_grad<float>(params);
      for (std::size_t off = 0; off < bn; off += tc.micro_batch) {
        const std::size_t mn = std::min(tc.micro_batch, bn - off);
        const std::span<const std::size_t> idx(order.data() + start + off, mn);
        const auto loss = chunk_loss(model, data, idx, tc, kTrainNoiseTag, epoch, start + off);
        const double value = loss.item();
        if (!std::isfinite(value))
          throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch + 1) + ", batch starting at " +
                             std::to_string(start) + " (lr " + format_double(tc.learning_rate) + ")");
        loss.backward(static_cast<float>(mn) / static_cast<float>(bn));
        epoch_total += value * static_cast<double>(mn);
      }
      if (tc.grad_clip > 0.0) nn::clip_grad_norm<float>(params, tc.grad_clip);
      nn::sgd_step<float>(params, opt);
    }

    const double epoch_loss = epoch_total / static_cast<double>(order.size());
    record.epoch_loss.push_back(epoch_loss);
    record.epochs = epoch + 1;
    if (on_epoch) on_epoch(epoch + 1, epoch_loss);

    const std::size_t w = tc.plateau_epochs;
    if (tc.early_stop && w > 0 && record.epoch_loss.size() > w) {
      const auto& l = record.epoch_loss;
      const double before = *std::min_element(l.begin(), l.end() - static_cast<std::ptrdiff_t>(w));
      const double now = *std::min_element(l.begin(), l.end());
      if (before > 0.0 && (before - now) / before < tc.plateau_tolerance) {
        record.early_stopped = true;
        break;
      }
    }
  }
  return record;
}

ModelCheckpoint train(std::span<const SampleSequence> data, const TransceiverConfig& cfg, const TrainConfig& tc,
                      const EpochCallback& on_epoch) {
  Transceiver<float> model(cfg, tc.seed);
  auto record = train_model(model, data, tc, on_epoch);
  return make_checkpoint(model, std::move(record));
}

MetricReport evaluate_system(const SystemFn& system, std::span<const SampleSequence> test, const EvalConfig& ec,
                             const SampleCallback& on_sample) {
  if (test.empty()) throw InvalidArgument("evaluate: empty test set");
  MetricReport report;
  bool pesq_ok = ec.pesq.has_value();
  std::size_t point = 0;
  for (const auto& kind : ec.channels) {
    for (double snr : ec.snrs_db) {
      MetricRow row;
      row.channel = kind;
      row.snr_db = snr;
      row.count = test.size();
      row.seed = ec.seed;
      double mse_sum = 0.0, sdr_sum = 0.0, pesq_sum = 0.0;
      std::vector<SampleSequence> outputs;
      for (std::size_t i = 0; i < test.size(); ++i) {
        Rng rng(ec.seed, stream_id(kEvalTag, point, i));
        auto out = system(test[i], kind, snr, rng);
        mse_sum += mse(test[i], out);
        sdr_sum += sdr(test[i], out);
        if (pesq_ok) {
          try {
            pesq_sum += pesq_external(test[i], out, *ec.pesq);
          } catch (const PesqUnavailable& e) {
            std::fprintf(stderr, "warning: %s; PESQ column marked unavailable\n", e.what());
            pesq_ok = false;
          }
        }
        outputs.push_back(std::move(out));
      }
      const double count = static_cast<double>(test.size());
      row.mse = mse_sum / count;
      row.sdr_db = sdr_sum / count;
      if (pesq_ok) row.pesq = pesq_sum / count;
      if (on_sample)
        for (std::size_t i = 0; i < outputs.size(); ++i) on_sample(row, i, outputs[i]);
      report.rows.push_back(row);
      ++point;
    }
  }
  if (ec.pesq && !pesq_ok)
    for (auto& r : report.rows) r.pesq.reset();
  return report;
}

SystemFn deepsc_system(const Transceiver<float>& model) {
  return [&model](const SampleSequence& s, const channel::ChannelKind& kind, double snr, Rng& rng) {
    nn::NoGradGuard guard;
    const auto m = to_frames<float>(std::span<const SampleSequence>(&s, 1), model.config());
    std::vector<channel::ChannelRealization> reals{channel::realize(kind, snr, rng)};
    std::vector<Rng> noise{rng};
    return from_frames(model.forward(m, reals, noise), 0, s.rate);
  };
}

SystemFn classic_system(const classic::ClassicConfig& cfg) {
  return [cfg](const SampleSequence& s, const channel::ChannelKind& kind, double snr, Rng& rng) {
    return classic::classic_pipeline(s, cfg, kind, snr, rng).recovered;
  };
}

SystemFn semi_traditional_system(const Transceiver<float>& codec, const classic::ClassicConfig& cfg) {
  if (codec.config().variant != Variant::FeatureCodec)
    throw InvalidArgument("semi-traditional system needs a feature-codec model");
  return [&codec, cfg](const SampleSequence& s, const channel::ChannelKind& kind, double snr, Rng& rng) {
    nn::NoGradGuard guard;
    const auto m = to_frames<float>(std::span<const SampleSequence>(&s, 1), codec.config());
    const auto u = codec.channel_encode(codec.semantic_encode(m));
    float peak = 0.0f;
    for (float v : u.values()) peak = std::max(peak, std::abs(v));
    if (peak == 0.0f) peak = 1.0f;
    SampleSequence features;
    features.rate = s.rate;
    features.samples.assign(u.values().begin(), u.values().end());
    for (auto& v : features.samples) v /= peak;
    auto rx = classic::classic_pipeline(features, cfg, kind, snr, rng).recovered;
    for (auto& v : rx.samples) v *= peak;
    const auto y = nn::Tensor<float>::from(u.shape(), std::move(rx.samples));
    return from_frames(codec.semantic_decode(codec.channel_decode(y)), 0, s.rate);
  };
}

MetricReport evaluate(const ModelCheckpoint& ckpt, std::span<const SampleSequence> test, const EvalConfig& ec,
                      const SampleCallback& on_sample) {
  const auto model = instantiate(ckpt);
  return evaluate_system(deepsc_system(model), test, ec, on_sample);
}

}  // namespace deepsc::model
