#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "deepsc/pcm.hpp"

namespace deepsc::classic {

/// Log-likelihood ratios, one per coded bit; positive favours bit 0.
using LlrVector = std::vector<double>;

/// Magnitude limit applied to channel and extrinsic LLRs.
inline constexpr double kLlrClamp = 50.0;

/// Memory-3 recursive systematic convolutional encoder, feedback 13 (octal),
/// feedforward 15 (octal). Shared by both constituents of the turbo code.
struct Rsc {
  static constexpr int kMemory = 3;
  static constexpr int kStates = 1 << kMemory;

  /// State bits: bit 2 = most recent register (a_{k-1}), bit 0 = oldest (a_{k-3}).
  static constexpr int next_state(int state, int input) {
    const int a = feedback(state, input);
    return (a << 2) | (state >> 1);
  }
  static constexpr int parity(int state, int input) {
    const int a = feedback(state, input);
    const int s1 = (state >> 2) & 1;
    const int s3 = state & 1;
    return a ^ s1 ^ s3;
  }
  /// Input that drives the feedback to zero, used for trellis termination.
  static constexpr int tail_input(int state) { return ((state >> 1) & 1) ^ (state & 1); }

 private:
  static constexpr int feedback(int state, int input) {
    const int s2 = (state >> 1) & 1;
    const int s3 = state & 1;
    return input ^ s2 ^ s3;
  }
};

struct TurboConfig {
  std::size_t block_length = 512;
  int iterations = 5;
  /// Extrinsic information is multiplied by this factor before being passed on.
  double extrinsic_scale = 0.7;
  /// interleaved[k] = natural[interleaver[k]]
  std::vector<std::uint32_t> interleaver;

  /// The 512-bit configuration with the published interleaver table.
  static TurboConfig standard();
  void validate() const;
};

/// The fixed 512-entry permutation published in data/interleaver_512.hex.
std::span<const std::uint32_t> standard_interleaver();

/// Fisher-Yates permutation driven by std::mt19937_64(seed) raw outputs.
std::vector<std::uint32_t> make_interleaver(std::size_t length, std::uint64_t seed);

/// Coded bits per block: 3K systematic/parity bits plus 12 tail bits.
std::size_t coded_length(const TurboConfig& cfg);

/// Layout: K systematic | K parity-1 | K parity-2 (interleaved order) |
/// 3 tail systematic + 3 tail parity of encoder 1 | same for encoder 2.
Bits turbo_encode(std::span<const std::uint8_t> info, const TurboConfig& cfg);

/// Iterative decoding with two SOVA constituent decoders. LLRs follow the
/// turbo_encode layout.
Bits turbo_decode(std::span<const double> llrs, const TurboConfig& cfg);

/// Soft-output Viterbi decoding of one terminated RSC trellis.
/// `sys`/`par` hold K + 3 channel LLRs (tail included); `apriori` holds K.
/// Returns K a-posteriori LLRs for the information bits.
std::vector<double> sova_decode(std::span<const double> sys, std::span<const double> par,
                                std::span<const double> apriori);

}  // namespace deepsc::classic
