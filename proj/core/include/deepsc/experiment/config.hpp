#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deepsc/classic.hpp"
#include "deepsc/keyvalue.hpp"
#include "deepsc/model/trainer.hpp"
#include "deepsc/model/transceiver.hpp"

namespace deepsc::experiment {

enum class Scenario { Telephone, Multimedia };
enum class System { DeepScS, CnnOnly, Classic, SemiTraditional };

std::string to_string(Scenario s);
Scenario parse_scenario(std::string_view text);
std::string to_string(System s);
System parse_system(std::string_view text);

/// 8000 Hz or 44100 Hz.
int scenario_rate(Scenario s);
/// 8 or 16 channel-coder filters.
std::size_t scenario_channel_filters(Scenario s);

/// Schema (key = value, `#` comments), version line `format = deepsc-experiment/1`:
///
///   scenario, system, seed
///   dataset.manifest            empty: synthetic corpus
///   dataset.train_count, dataset.test_count, dataset.length
///   model.*                     transceiver overrides
///   train.*                     optimizer and channel settings
///   eval.channels               comma list of awgn|rayleigh|rician[:k]
///   eval.snr_db                 comma list, sorted ascending
///   eval.audio_samples          recovered WAVs kept per grid point
///   eval.pesq, eval.pesq_regex  evaluator (empty: environment variable)
///   classic.law, classic.soft_demapping, classic.turbo_iterations
struct ExperimentConfig {
  Scenario scenario = Scenario::Telephone;
  System system = System::DeepScS;
  std::uint64_t seed = 42;

  std::string manifest;
  std::size_t train_count = 64;
  std::size_t test_count = 16;
  std::size_t sequence_length = 16384;

  model::TransceiverConfig model;
  model::TrainConfig train;
  model::EvalConfig eval;
  std::size_t audio_samples = 1;
  classic::ClassicConfig classic;

  /// Defaults for a scenario and system.
  static ExperimentConfig preset(Scenario scenario, System system);

  int sample_rate() const { return scenario_rate(scenario); }
  /// Variant the system trains (cnn-only, deepsc-s, feature-codec).
  model::Variant model_variant() const;

  /// Throws InvalidArgument with the offending key.
  void validate() const;
  KeyValues to_keyvalues() const;
  std::string to_text() const { return to_keyvalues().to_string(); }
  /// Keys absent from `kv` keep the preset of the scenario/system it names.
  static ExperimentConfig from_keyvalues(const KeyValues& kv);
  static ExperimentConfig load(const std::string& path);

  /// Pushes `seed` into the training and evaluation seeds.
  void apply_seed(std::uint64_t s);
};

}  // namespace deepsc::experiment
