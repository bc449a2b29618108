#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace deepsc {

/// Mono speech waveform, amplitudes in [-1, 1].
struct SampleSequence {
  std::vector<float> samples;
  int rate = 0;

  std::size_t size() const noexcept { return samples.size(); }
  /// True for the 8 kHz, 16 kHz and 44.1 kHz rates the experiments use.
  bool standard_rate() const noexcept;
};

/// B x F x L batch of frames, row-major (batch, frame, sample-in-frame).
struct FrameGrid {
  std::vector<float> data;
  std::size_t batch = 0;
  std::size_t frames = 0;
  std::size_t frame_len = 0;

  float& at(std::size_t b, std::size_t f, std::size_t l) {
    return data[(b * frames + f) * frame_len + l];
  }
  float at(std::size_t b, std::size_t f, std::size_t l) const {
    return data[(b * frames + f) * frame_len + l];
  }
};

using Complex = std::complex<double>;

/// Complex channel symbols for one or more sequences.
struct SymbolBlock {
  std::vector<Complex> symbols;
  /// Factor the raw input was multiplied by during power normalization (1 if none).
  double scale = 1.0;

  std::size_t size() const noexcept { return symbols.size(); }
};

/// Row-major reshape of a batch of equal-length sequences into frames.
/// Every sequence must hold exactly frames * frame_len samples.
FrameGrid frame(std::span<const SampleSequence> batch, std::size_t frames, std::size_t frame_len);

/// Inverse of frame(); every output carries `rate`.
std::vector<SampleSequence> deframe(const FrameGrid& grid, int rate = 0);

/// Zero-pads the tail to `length` or splits into consecutive non-overlapping
/// pieces of `length` (the last piece zero-padded).
std::vector<SampleSequence> fit_length(const SampleSequence& seq, std::size_t length);

/// Interprets `raw` as interleaved (re, im) pairs and scales it to unit mean
/// squared magnitude. Throws NumericError on an all-zero input.
SymbolBlock normalize_power(std::span<const double> raw);
SymbolBlock normalize_power(std::span<const float> raw);

/// Mean squared magnitude of a symbol block.
double mean_power(std::span<const Complex> symbols);

}  // namespace deepsc
