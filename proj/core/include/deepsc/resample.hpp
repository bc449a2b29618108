#pragma once

#include "deepsc/signal.hpp"

namespace deepsc {

struct ResamplerConfig {
  int taps_per_phase = 64;
  /// Passband edge as a fraction of the lower of the two sample rates.
  double cutoff = 0.45;
  double kaiser_beta = 8.0;
};

/// Rational-ratio polyphase windowed-sinc resampler. Output length is
/// round(W * target_rate / rate); the signal is zero-extended at both ends.
SampleSequence resample(const SampleSequence& seq, int target_rate, const ResamplerConfig& cfg = {});

}  // namespace deepsc
