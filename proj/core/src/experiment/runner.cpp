#include "deepsc/experiment/runner.hpp"

#include <algorithm>
#include <cstdio>

#include "deepsc/error.hpp"
#include "deepsc/experiment/report.hpp"
#include "deepsc/wav.hpp"

namespace deepsc::experiment {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kTrainStream = 0;
constexpr std::uint64_t kTestStream = 1;

void note(const LogFn& log, const std::string& msg) {
  if (log) log(msg);
}

void write_snapshot(const ExperimentConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  write_text(dir / "config.txt", cfg.to_text());
  write_text(dir / "seed.txt", std::to_string(cfg.seed) + "\n");
}

std::string snr_tag(double snr) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.1fdB", snr);
  return buf;
}

MetricReport sweep(const ExperimentConfig& cfg, const model::SystemFn& system, const fs::path& out_dir,
                   const LogFn& log) {
  const auto test = load_split(cfg, Split::Test);
  note(log, "evaluating " + to_string(cfg.system) + " on " + std::to_string(test.size()) + " sequences, " +
                std::to_string(cfg.eval.channels.size() * cfg.eval.snrs_db.size()) + " grid points");
  const fs::path audio = out_dir / "audio";
  if (cfg.audio_samples > 0) fs::create_directories(audio);
  auto keep = [&](const MetricRow& row, std::size_t i, const SampleSequence& rec) {
    if (i >= cfg.audio_samples) return;
    auto name = channel::to_string(row.channel) + "_" + snr_tag(row.snr_db) + "_seq" + std::to_string(i) + ".wav";
    std::replace(name.begin(), name.end(), ':', '_');
    write_wav(audio / name, rec);
  };
  auto report = model::evaluate_system(system, test, cfg.eval, keep);
  for (std::size_t i = 0; i < std::min(cfg.audio_samples, test.size()); ++i)
    write_wav(audio / ("reference_seq" + std::to_string(i) + ".wav"), test[i]);
  write_text(out_dir / metrics_file_name(cfg.system), to_csv(report));
  return report;
}

}  // namespace

std::string metrics_file_name(System s) { return "metrics_" + to_string(s) + ".csv"; }

std::vector<SampleSequence> load_split(const ExperimentConfig& cfg, Split split) {
  if (cfg.manifest.empty()) {
    const bool train = split == Split::Train;
    return synthesize_corpus(train ? cfg.train_count : cfg.test_count, cfg.sample_rate(), cfg.sequence_length,
                             cfg.seed, train ? kTrainStream : kTestStream);
  }
  return ingest_dataset(cfg.manifest, split, cfg.sample_rate(), cfg.sequence_length);
}

fs::path run_train(const ExperimentConfig& cfg, const fs::path& out_dir, const LogFn& log) {
  cfg.validate();
  if (cfg.system == System::Classic) throw InvalidArgument("the classic system has nothing to train");
  write_snapshot(cfg, out_dir);
  const auto data = load_split(cfg, Split::Train);
  note(log, "training " + to_string(cfg.system) + " on " + std::to_string(data.size()) + " sequences");
  auto ckpt = model::train(data, cfg.model, cfg.train, [&](std::size_t epoch, double loss) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "epoch %zu loss %.6e", epoch, loss);
    note(log, buf);
  });
  write_text(out_dir / "loss.csv", loss_csv(ckpt.record.epoch_loss));
  const auto path = out_dir / "model.ckpt";
  model::save_checkpoint(path, ckpt);
  return path;
}

MetricReport run_eval(const ExperimentConfig& cfg, const fs::path& checkpoint, const fs::path& out_dir,
                      const LogFn& log) {
  cfg.validate();
  if (cfg.system == System::Classic) return run_classic(cfg, out_dir, log);
  const auto ckpt = model::load_checkpoint(checkpoint);
  if (ckpt.config.variant != cfg.model_variant())
    throw InvalidArgument("checkpoint variant '" + model::to_string(ckpt.config.variant) + "' does not match system '" +
                          to_string(cfg.system) + "'");
  const auto model = model::instantiate(ckpt);
  write_snapshot(cfg, out_dir);
  const auto system = cfg.system == System::SemiTraditional ? model::semi_traditional_system(model, cfg.classic)
                                                            : model::deepsc_system(model);
  return sweep(cfg, system, out_dir, log);
}

MetricReport run_classic(const ExperimentConfig& cfg, const fs::path& out_dir, const LogFn& log) {
  cfg.validate();
  write_snapshot(cfg, out_dir);
  return sweep(cfg, model::classic_system(cfg.classic), out_dir, log);
}

}  // namespace deepsc::experiment
