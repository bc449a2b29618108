#pragma once

#include <array>
#include <cstdint>

namespace deepsc {

/// Philox4x32-10 counter-based generator.
///
/// The 64-bit seed is the key; the 128-bit counter is split into a stream id
/// (high half) and a block index (low half). Two generators with the same
/// seed and different stream ids never share output, which is how parallel
/// Monte-Carlo runs get disjoint streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform double in (0, 1], safe for log().
  double uniform_open0() noexcept;
  /// Standard normal draw (Box-Muller, pairs cached).
  double normal() noexcept;
  /// Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) noexcept;

  /// A generator on the same key with an independent stream id.
  [[nodiscard]] Rng substream(std::uint64_t stream) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> counter,
                                             std::array<std::uint32_t, 2> key) noexcept;

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace deepsc
