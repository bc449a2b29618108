#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "deepsc/pcm.hpp"
#include "deepsc/signal.hpp"
#include "deepsc/turbo.hpp"

namespace deepsc::classic {

/// Gray-labelled square 64-QAM. The first three bits of a symbol select the
/// in-phase level, the last three the quadrature level; along each axis the
/// labels 000,001,011,010,110,111,101,100 map to -7,-5,-3,-1,1,3,5,7 (before
/// the 1/sqrt(42) power normalization).
namespace qam64 {

inline constexpr int kBitsPerSymbol = 6;
inline constexpr double kScale = 0.15430334996209191;  // 1/sqrt(42)

/// Amplitude level (-7..7, odd) for a 3-bit axis label.
int axis_level(unsigned label);
/// Constellation point for a 6-bit label.
Complex point(unsigned label);
/// All 64 points indexed by label.
const std::array<Complex, 64>& constellation();

}  // namespace qam64

/// Throws InvalidArgument when the bit count is not a multiple of 6.
SymbolBlock qam64_modulate(std::span<const std::uint8_t> bits);

/// Max-log LLRs: (min_{b=1} |y-p|^2 - min_{b=0} |y-p|^2) / sigma^2, clamped to
/// +-kLlrClamp. Throws InvalidArgument for sigma^2 <= 0.
LlrVector qam64_soft_demod(std::span<const Complex> y, double noise_variance);

/// Nearest-point hard decisions, expressed as +-`magnitude` LLRs.
LlrVector qam64_hard_demod(std::span<const Complex> y, double magnitude);

}  // namespace deepsc::classic
