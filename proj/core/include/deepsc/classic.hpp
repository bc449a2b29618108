#pragma once

#include <cstdint>

#include "deepsc/channel.hpp"
#include "deepsc/pcm.hpp"
#include "deepsc/qam.hpp"
#include "deepsc/turbo.hpp"

namespace deepsc::classic {

struct ClassicConfig {
  PcmLaw law = PcmLaw::ALaw8;
  TurboConfig turbo = TurboConfig::standard();
  /// Max-log soft demapping into the turbo decoder; hard decisions otherwise.
  bool soft_demapping = true;
  /// LLR magnitude given to hard decisions.
  double hard_llr = 2.0;
};

struct ClassicResult {
  SampleSequence recovered;
  std::size_t info_bits = 0;
  std::size_t bit_errors = 0;
  std::size_t blocks = 0;
  std::size_t block_errors = 0;
  std::size_t symbols = 0;
  channel::ChannelRealization realization;
};

/// PCM -> turbo (per 512-bit block, zero-padded tail block) -> 64-QAM ->
/// block-fading channel -> zero-forcing -> soft demap -> turbo decode -> PCM.
/// The output has the input's length and rate.
ClassicResult classic_pipeline(const SampleSequence& seq, const ClassicConfig& cfg,
                               const channel::ChannelKind& kind, double snr_db, Rng& rng);

/// Same pipeline for callers that only need the recovered waveform.
SampleSequence classic_pipeline(const SampleSequence& seq, PcmLaw law, const channel::ChannelKind& kind,
                                double snr_db, std::uint64_t seed);

}  // namespace deepsc::classic
