#include "deepsc/experiment/config.hpp"

#include <algorithm>
#include <cmath>

#include "deepsc/error.hpp"

namespace deepsc::experiment {

namespace {
constexpr const char* kFormat = "deepsc-experiment/1";
}

std::string to_string(Scenario s) { return s == Scenario::Telephone ? "telephone" : "multimedia"; }

Scenario parse_scenario(std::string_view text) {
  if (text == "telephone") return Scenario::Telephone;
  if (text == "multimedia") return Scenario::Multimedia;
  throw InvalidArgument("unknown scenario '" + std::string(text) + "' (telephone|multimedia)");
}

std::string to_string(System s) {
  switch (s) {
    case System::DeepScS: return "deepsc-s";
    case System::CnnOnly: return "cnn-only";
    case System::Classic: return "classic";
    case System::SemiTraditional: return "semi-traditional";
  }
  return "?";
}

System parse_system(std::string_view text) {
  if (text == "deepsc-s") return System::DeepScS;
  if (text == "cnn-only") return System::CnnOnly;
  if (text == "classic") return System::Classic;
  if (text == "semi-traditional") return System::SemiTraditional;
  throw InvalidArgument("unknown system '" + std::string(text) + "' (deepsc-s|cnn-only|classic|semi-traditional)");
}

int scenario_rate(Scenario s) { return s == Scenario::Telephone ? 8000 : 44100; }
std::size_t scenario_channel_filters(Scenario s) { return s == Scenario::Telephone ? 8 : 16; }

model::Variant ExperimentConfig::model_variant() const {
  switch (system) {
    case System::CnnOnly: return model::Variant::CnnOnly;
    case System::SemiTraditional: return model::Variant::FeatureCodec;
    default: return model::Variant::DeepScS;
  }
}

ExperimentConfig ExperimentConfig::preset(Scenario scenario, System system) {
  ExperimentConfig c;
  c.scenario = scenario;
  c.system = system;
  c.model = scenario == Scenario::Telephone ? model::TransceiverConfig::telephone(c.model_variant())
                                            : model::TransceiverConfig::multimedia(c.model_variant());
  c.train.noiseless = system == System::SemiTraditional;
  c.apply_seed(c.seed);
  return c;
}

void ExperimentConfig::apply_seed(std::uint64_t s) {
  seed = s;
  train.seed = s;
  eval.seed = s;
}

void ExperimentConfig::validate() const {
  model.validate();
  train.validate();
  if (model.variant != model_variant())
    throw InvalidArgument("model.variant '" + model::to_string(model.variant) + "' does not match system '" +
                          to_string(system) + "'");
  if (model.channel_filters != scenario_channel_filters(scenario))
    throw InvalidArgument("model.channel_filters must be " + std::to_string(scenario_channel_filters(scenario)) +
                          " for the " + to_string(scenario) + " scenario");
  if (sequence_length != model.samples_per_sequence())
    throw InvalidArgument("dataset.length must equal model.frames * model.frame_len");
  if (manifest.empty() && (train_count == 0 || test_count == 0))
    throw InvalidArgument("dataset.train_count and dataset.test_count must be positive");
  if (eval.channels.empty()) throw InvalidArgument("eval.channels is empty");
  if (eval.snrs_db.empty()) throw InvalidArgument("eval.snr_db is empty");
  for (double s : eval.snrs_db)
    if (!std::isfinite(s)) throw InvalidArgument("eval.snr_db must be finite");
  if (!std::is_sorted(eval.snrs_db.begin(), eval.snrs_db.end()))
    throw InvalidArgument("eval.snr_db must be sorted ascending");
  classic.turbo.validate();
}

KeyValues ExperimentConfig::to_keyvalues() const {
  KeyValues kv;
  kv.set("format", std::string(kFormat));
  kv.set("scenario", to_string(scenario));
  kv.set("system", to_string(system));
  kv.set("seed", static_cast<unsigned long long>(seed));
  kv.set("dataset.manifest", manifest);
  kv.set("dataset.train_count", static_cast<unsigned long long>(train_count));
  kv.set("dataset.test_count", static_cast<unsigned long long>(test_count));
  kv.set("dataset.length", static_cast<unsigned long long>(sequence_length));
  model.write(kv);
  train.write(kv);
  std::string channels, snrs;
  for (std::size_t i = 0; i < eval.channels.size(); ++i) channels += (i ? "," : "") + channel::to_string(eval.channels[i]);
  for (std::size_t i = 0; i < eval.snrs_db.size(); ++i) snrs += (i ? "," : "") + format_double(eval.snrs_db[i]);
  kv.set("eval.channels", channels);
  kv.set("eval.snr_db", snrs);
  kv.set("eval.seed", static_cast<unsigned long long>(eval.seed));
  kv.set("eval.audio_samples", static_cast<unsigned long long>(audio_samples));
  kv.set("eval.pesq", eval.pesq ? eval.pesq->evaluator : std::string());
  kv.set("eval.pesq_regex", eval.pesq ? eval.pesq->score_regex : PesqConfig{}.score_regex);
  kv.set("classic.law", std::string(classic.law == classic::PcmLaw::ALaw8 ? "alaw" : "uniform16"));
  kv.set("classic.soft_demapping", classic.soft_demapping);
  kv.set("classic.turbo_iterations", static_cast<long long>(classic.turbo.iterations));
  return kv;
}

ExperimentConfig ExperimentConfig::from_keyvalues(const KeyValues& kv) {
  const auto format = kv.get_string("format", kFormat);
  if (format != kFormat) throw FormatError("unsupported experiment config format '" + format + "'");
  auto c = preset(parse_scenario(kv.get_string("scenario", "telephone")),
                  parse_system(kv.get_string("system", "deepsc-s")));
  c.apply_seed(kv.get_uint("seed", c.seed));
  c.manifest = kv.get_string("dataset.manifest", c.manifest);
  c.train_count = kv.get_uint("dataset.train_count", c.train_count);
  c.test_count = kv.get_uint("dataset.test_count", c.test_count);
  c.sequence_length = kv.get_uint("dataset.length", c.sequence_length);

  // Start from the preset model so absent keys keep scenario defaults.
  KeyValues model_kv;
  c.model.write(model_kv);
  for (const auto& [k, v] : kv.entries())
    if (k.starts_with("model.")) model_kv.set(k, v);
  c.model = model::TransceiverConfig::read(model_kv);

  KeyValues train_kv;
  c.train.write(train_kv);
  for (const auto& [k, v] : kv.entries())
    if (k.starts_with("train.")) train_kv.set(k, v);
  c.train = model::TrainConfig::read(train_kv);

  if (kv.contains("eval.channels")) {
    c.eval.channels.clear();
    for (const auto& s : split_list(kv.get_string("eval.channels"))) c.eval.channels.push_back(channel::parse_channel(s));
  }
  if (kv.contains("eval.snr_db")) {
    c.eval.snrs_db.clear();
    for (const auto& s : split_list(kv.get_string("eval.snr_db"))) {
      try {
        c.eval.snrs_db.push_back(std::stod(s));
      } catch (const std::logic_error&) {
        throw FormatError("eval.snr_db: '" + s + "' is not a number");
      }
    }
  }
  c.eval.seed = kv.get_uint("eval.seed", c.eval.seed);
  c.audio_samples = kv.get_uint("eval.audio_samples", c.audio_samples);
  PesqConfig pesq;
  pesq.evaluator = kv.get_string("eval.pesq", "");
  pesq.score_regex = kv.get_string("eval.pesq_regex", pesq.score_regex);
  c.eval.pesq = pesq;
  c.classic.law = classic::parse_pcm_law(kv.get_string("classic.law", "alaw"));
  c.classic.soft_demapping = kv.get_bool("classic.soft_demapping", c.classic.soft_demapping);
  c.classic.turbo.iterations = static_cast<int>(kv.get_int("classic.turbo_iterations", c.classic.turbo.iterations));
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) { return from_keyvalues(KeyValues::load(path)); }

}  // namespace deepsc::experiment
