#pragma once

#include <optional>
#include <string>

#include "deepsc/error.hpp"
#include "deepsc/signal.hpp"

namespace deepsc {

/// Environment variable holding the evaluator path.
inline constexpr const char* kPesqEnvVar = "DEEPSC_PESQ";

/// The evaluator is not configured, missing, or failed to run.
class PesqUnavailable : public Error {
 public:
  using Error::Error;
};

struct PesqConfig {
  /// Executable; empty means "look up kPesqEnvVar".
  std::string evaluator;
  /// Applied to the last non-empty output line; capture group 1 is the score.
  std::string score_regex = R"(([-+]?[0-9]*\.?[0-9]+)\s*$)";

  /// Evaluator path from the config or the environment, if any.
  std::optional<std::string> resolve() const;
};

/// Writes both signals to temporary 16-bit WAVs and runs
/// `<evaluator> +<rate> <ref.wav> <deg.wav>`. Inputs at other rates than
/// 8 or 16 kHz are resampled to 16 kHz first.
///
/// Throws PesqUnavailable when no evaluator can be run, FormatError when the
/// output cannot be parsed or the score is outside [-0.5, 4.5].
double pesq_external(const SampleSequence& reference, const SampleSequence& degraded, const PesqConfig& cfg);

/// Extracts the score from evaluator output (exposed for tests).
double parse_pesq_output(const std::string& output, const std::string& score_regex);

}  // namespace deepsc
