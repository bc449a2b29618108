#include "deepsc/classic.hpp"

#include <algorithm>

namespace deepsc::classic {

namespace {
// Demapper variance floor for a noiseless link; drives every LLR to the clamp.
constexpr double kMinDemapVariance = 1e-12;
}

ClassicResult classic_pipeline(const SampleSequence& seq, const ClassicConfig& cfg,
                               const channel::ChannelKind& kind, double snr_db, Rng& rng) {
  cfg.turbo.validate();
  const std::size_t k = cfg.turbo.block_length;
  const std::size_t n = coded_length(cfg.turbo);

  const Bits info = pcm_encode(seq, cfg.law);
  const std::size_t blocks = (info.size() + k - 1) / k;

  Bits coded;
  coded.reserve(blocks * n);
  Bits block(k);
  for (std::size_t b = 0; b < blocks; ++b) {
    std::fill(block.begin(), block.end(), 0);
    const std::size_t first = b * k;
    const std::size_t count = std::min(k, info.size() - first);
    std::copy_n(info.begin() + static_cast<std::ptrdiff_t>(first), count, block.begin());
    const Bits cw = turbo_encode(block, cfg.turbo);
    coded.insert(coded.end(), cw.begin(), cw.end());
  }
  // Pad to a whole number of QAM symbols (a no-op for the 512-bit code).
  while (coded.size() % qam64::kBitsPerSymbol != 0) coded.push_back(0);

  ClassicResult result;
  const SymbolBlock tx = qam64_modulate(coded);
  result.symbols = tx.size();
  result.realization = channel::realize(kind, snr_db, rng);
  const auto rx = channel::transmit(tx.symbols, result.realization, rng);
  const auto eq = channel::equalize(rx, result.realization);

  const double demap_var = std::max(channel::equalized_noise_variance(result.realization), kMinDemapVariance);
  const LlrVector llr = cfg.soft_demapping ? qam64_soft_demod(eq, demap_var) : qam64_hard_demod(eq, cfg.hard_llr);

  Bits decoded;
  decoded.reserve(blocks * k);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::span<const double> cw(llr.data() + b * n, n);
    const Bits bits = turbo_decode(cw, cfg.turbo);
    std::size_t errors = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t pos = b * k + i;
      const std::uint8_t sent = pos < info.size() ? info[pos] : 0;
      if (bits[i] != sent) ++errors;
    }
    if (errors > 0) ++result.block_errors;
    result.bit_errors += errors;
    decoded.insert(decoded.end(), bits.begin(), bits.end());
  }
  decoded.resize(info.size());

  result.recovered = pcm_decode(decoded, cfg.law, seq.rate);
  result.info_bits = info.size();
  result.blocks = blocks;
  return result;
}

SampleSequence classic_pipeline(const SampleSequence& seq, PcmLaw law, const channel::ChannelKind& kind,
                                double snr_db, std::uint64_t seed) {
  ClassicConfig cfg;
  cfg.law = law;
  Rng rng(seed);
  return classic_pipeline(seq, cfg, kind, snr_db, rng).recovered;
}

}  // namespace deepsc::classic
