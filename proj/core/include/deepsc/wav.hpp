#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "deepsc/signal.hpp"

namespace deepsc {

/// Reads a RIFF/WAVE file: PCM 8-bit (unsigned), PCM 16-bit LE, or IEEE float
/// 32-bit. Multi-channel files contribute their first channel. Integer PCM is
/// divided by 2^(bits-1).
SampleSequence load_wav(const std::filesystem::path& path);
SampleSequence parse_wav(std::span<const std::uint8_t> bytes);

/// 16-bit PCM mono WAV; samples are clipped to [-1, 1] and scaled by 32768.
void write_wav(const std::filesystem::path& path, const SampleSequence& seq);
std::vector<std::uint8_t> encode_wav16(const SampleSequence& seq);

/// 32-bit float mono WAV (used for lossless test fixtures).
std::vector<std::uint8_t> encode_wav_float(const SampleSequence& seq);

}  // namespace deepsc
