#include "deepsc/qam.hpp"

#include <algorithm>
#include <limits>

#include "deepsc/error.hpp"

namespace deepsc::classic {

namespace qam64 {

namespace {

// Position of each 3-bit label along an axis (inverse Gray code).
constexpr std::array<int, 8> kLabelPosition = {0, 1, 3, 2, 7, 6, 4, 5};
// Label found at each axis position, left to right.
constexpr std::array<unsigned, 8> kPositionLabel = {0b000, 0b001, 0b011, 0b010, 0b110, 0b111, 0b101, 0b100};

/// Squared distance from `v` to the nearest level whose label has bit `bit` (0 = MSB) equal to `value`.
double axis_min_distance(double v, int bit, unsigned value) {
  double best = std::numeric_limits<double>::infinity();
  for (int pos = 0; pos < 8; ++pos) {
    const unsigned label = kPositionLabel[pos];
    if (((label >> (2 - bit)) & 1u) != value) continue;
    const double d = v - (2 * pos - 7) * kScale;
    best = std::min(best, d * d);
  }
  return best;
}

}  // namespace

int axis_level(unsigned label) { return 2 * kLabelPosition[label & 7u] - 7; }

Complex point(unsigned label) {
  return {axis_level(label >> 3) * kScale, axis_level(label) * kScale};
}

const std::array<Complex, 64>& constellation() {
  static const std::array<Complex, 64> table = [] {
    std::array<Complex, 64> t{};
    for (unsigned i = 0; i < 64; ++i) t[i] = point(i);
    return t;
  }();
  return table;
}

}  // namespace qam64

SymbolBlock qam64_modulate(std::span<const std::uint8_t> bits) {
  if (bits.size() % qam64::kBitsPerSymbol != 0) {
    throw InvalidArgument("qam64_modulate: bit count is not a multiple of 6");
  }
  SymbolBlock block;
  block.symbols.resize(bits.size() / qam64::kBitsPerSymbol);
  for (std::size_t i = 0; i < block.symbols.size(); ++i) {
    unsigned label = 0;
    for (int b = 0; b < qam64::kBitsPerSymbol; ++b) label = (label << 1) | (bits[6 * i + b] & 1u);
    block.symbols[i] = qam64::point(label);
  }
  return block;
}

LlrVector qam64_soft_demod(std::span<const Complex> y, double noise_variance) {
  if (!(noise_variance > 0.0)) throw InvalidArgument("qam64_soft_demod: noise variance must be positive");
  LlrVector llr(y.size() * qam64::kBitsPerSymbol);
  // Square QAM separates per axis: the other axis contributes the same minimum to both terms.
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double axes[2] = {y[i].real(), y[i].imag()};
    for (int a = 0; a < 2; ++a) {
      for (int bit = 0; bit < 3; ++bit) {
        const double d1 = qam64::axis_min_distance(axes[a], bit, 1);
        const double d0 = qam64::axis_min_distance(axes[a], bit, 0);
        llr[6 * i + 3 * a + bit] = std::clamp((d1 - d0) / noise_variance, -kLlrClamp, kLlrClamp);
      }
    }
  }
  return llr;
}

LlrVector qam64_hard_demod(std::span<const Complex> y, double magnitude) {
  LlrVector llr(y.size() * qam64::kBitsPerSymbol);
  const auto& points = qam64::constellation();
  for (std::size_t i = 0; i < y.size(); ++i) {
    unsigned best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (unsigned l = 0; l < 64; ++l) {
      const double d = std::norm(y[i] - points[l]);
      if (d < best_d) {
        best_d = d;
        best = l;
      }
    }
    for (int b = 0; b < 6; ++b) llr[6 * i + b] = ((best >> (5 - b)) & 1u) ? -magnitude : magnitude;
  }
  return llr;
}

}  // namespace deepsc::classic
