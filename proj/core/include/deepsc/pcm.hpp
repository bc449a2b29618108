#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "deepsc/signal.hpp"

namespace deepsc::classic {

/// One bit per element, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

enum class PcmLaw {
  ALaw8,      ///< ITU-T G.711 A-law, 8 bits per sample
  Uniform16,  ///< 16-bit two's-complement linear PCM
};

constexpr int bits_per_sample(PcmLaw law) { return law == PcmLaw::ALaw8 ? 8 : 16; }
PcmLaw parse_pcm_law(std::string_view text);

/// G.711 A-law compression of a 16-bit linear sample (13 most significant bits used).
std::uint8_t alaw_compress(std::int16_t linear);
/// G.711 A-law expansion to 16-bit linear (segment midpoints).
std::int16_t alaw_expand(std::uint8_t code);

/// [-1, 1] -> 16-bit linear, round(s * 32768) saturated to [-32768, 32767].
std::int16_t to_linear16(float sample);

/// Codewords are emitted MSB first. Samples outside [-1, 1] are clipped.
Bits pcm_encode(const SampleSequence& seq, PcmLaw law);
/// Throws InvalidArgument when the bit count is not a multiple of the word size.
SampleSequence pcm_decode(std::span<const std::uint8_t> bits, PcmLaw law, int rate);

/// Round trip through the quantizer alone (what a bit-transparent channel returns).
SampleSequence pcm_quantize(const SampleSequence& seq, PcmLaw law);

}  // namespace deepsc::classic
