#include "deepsc/pcm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deepsc/error.hpp"

namespace deepsc::classic {

namespace {

constexpr std::uint8_t kSignBit = 0x80;
constexpr std::uint8_t kQuantMask = 0x0F;
constexpr int kSegShift = 4;
constexpr std::uint8_t kSegMask = 0x70;
constexpr int kSegEnd[8] = {0x1F, 0x3F, 0x7F, 0xFF, 0x1FF, 0x3FF, 0x7FF, 0xFFF};

}  // namespace

PcmLaw parse_pcm_law(std::string_view text) {
  if (text == "alaw" || text == "alaw8" || text == "ALaw8") return PcmLaw::ALaw8;
  if (text == "uniform16" || text == "pcm16" || text == "Uniform16") return PcmLaw::Uniform16;
  throw InvalidArgument("unknown PCM law '" + std::string(text) + "'");
}

std::uint8_t alaw_compress(std::int16_t linear) {
  int pcm = linear >> 3;
  std::uint8_t mask;
  if (pcm >= 0) {
    mask = 0xD5;  // sign bit set, even bits inverted
  } else {
    mask = 0x55;
    pcm = -pcm - 1;
  }
  int seg = 0;
  while (seg < 8 && pcm > kSegEnd[seg]) ++seg;
  if (seg >= 8) return static_cast<std::uint8_t>(0x7F ^ mask);
  auto aval = static_cast<std::uint8_t>(seg << kSegShift);
  aval |= static_cast<std::uint8_t>((seg < 2 ? pcm >> 1 : pcm >> seg) & kQuantMask);
  return static_cast<std::uint8_t>(aval ^ mask);
}

std::int16_t alaw_expand(std::uint8_t code) {
  code ^= 0x55;
  int t = (code & kQuantMask) << 4;
  const int seg = (code & kSegMask) >> kSegShift;
  switch (seg) {
    case 0:
      t += 8;
      break;
    case 1:
      t += 0x108;
      break;
    default:
      t += 0x108;
      t <<= seg - 1;
  }
  return static_cast<std::int16_t>((code & kSignBit) ? t : -t);
}

std::int16_t to_linear16(float sample) {
  const float s = std::clamp(sample, -1.0f, 1.0f);
  const long q = std::lround(static_cast<double>(s) * 32768.0);
  return static_cast<std::int16_t>(std::clamp(q, -32768L, 32767L));
}

Bits pcm_encode(const SampleSequence& seq, PcmLaw law) {
  const int width = bits_per_sample(law);
  Bits bits;
  bits.reserve(seq.size() * static_cast<std::size_t>(width));
  for (float s : seq.samples) {
    const std::int16_t lin = to_linear16(s);
    const unsigned word = law == PcmLaw::ALaw8 ? alaw_compress(lin) : static_cast<std::uint16_t>(lin);
    for (int b = width - 1; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((word >> b) & 1u));
  }
  return bits;
}

SampleSequence pcm_decode(std::span<const std::uint8_t> bits, PcmLaw law, int rate) {
  const auto width = static_cast<std::size_t>(bits_per_sample(law));
  if (bits.size() % width != 0) {
    throw InvalidArgument("pcm_decode: " + std::to_string(bits.size() % width) +
                          " trailing bits do not form a sample");
  }
  SampleSequence seq{std::vector<float>(bits.size() / width), rate};
  for (std::size_t i = 0; i < seq.size(); ++i) {
    unsigned word = 0;
    for (std::size_t b = 0; b < width; ++b) word = (word << 1) | (bits[i * width + b] & 1u);
    const std::int16_t lin = law == PcmLaw::ALaw8 ? alaw_expand(static_cast<std::uint8_t>(word))
                                                  : static_cast<std::int16_t>(static_cast<std::uint16_t>(word));
    seq.samples[i] = static_cast<float>(lin) / 32768.0f;
  }
  return seq;
}

SampleSequence pcm_quantize(const SampleSequence& seq, PcmLaw law) {
  const auto bits = pcm_encode(seq, law);
  return pcm_decode(bits, law, seq.rate);
}

}  // namespace deepsc::classic
