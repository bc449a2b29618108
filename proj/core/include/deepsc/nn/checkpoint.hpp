#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "deepsc/nn/tensor.hpp"

namespace deepsc::nn {

/// On-disk parameter container (all integers little-endian):
///
///   magic    8 bytes  "DSCCKPT\0"
///   version  u32      1
///   config   u32 length + UTF-8 text (key = value lines)
///   digest   u64      FNV-1a 64 of the config text
///   count    u32      number of tensors
///   tensor   u32 name length + name, u32 rank, rank x u64 dims,
///            prod(dims) x f32 values
struct NamedTensor {
  std::string name;
  Shape shape;
  std::vector<float> values;
};

struct CheckpointData {
  std::string config;
  std::vector<NamedTensor> tensors;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::uint64_t fnv1a64(std::string_view text);

std::vector<std::uint8_t> encode_checkpoint(const CheckpointData& data);
/// Throws FormatError on bad magic, unknown version, digest mismatch or truncation.
CheckpointData decode_checkpoint(std::span<const std::uint8_t> bytes);

void write_checkpoint(const std::filesystem::path& path, const CheckpointData& data);
CheckpointData read_checkpoint(const std::filesystem::path& path);

}  // namespace deepsc::nn
