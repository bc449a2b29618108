#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "deepsc/experiment/config.hpp"
#include "deepsc/experiment/dataset.hpp"
#include "deepsc/metrics.hpp"

namespace deepsc::experiment {

using LogFn = std::function<void(const std::string&)>;

/// Synthetic corpus (train and test use disjoint streams) or the manifest split.
std::vector<SampleSequence> load_split(const ExperimentConfig& cfg, Split split);

/// Writes config.txt, seed.txt, loss.csv and model.ckpt into `out_dir`;
/// returns the checkpoint path.
std::filesystem::path run_train(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                const LogFn& log = {});

/// Writes config.txt, seed.txt, metrics_<system>.csv and audio/ samples.
MetricReport run_eval(const ExperimentConfig& cfg, const std::filesystem::path& checkpoint,
                      const std::filesystem::path& out_dir, const LogFn& log = {});

/// Same artifacts as run_eval for the PCM + turbo + 64-QAM chain.
MetricReport run_classic(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, const LogFn& log = {});

std::string metrics_file_name(System s);

}  // namespace deepsc::experiment
