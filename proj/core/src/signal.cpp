#include "deepsc/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deepsc/error.hpp"

namespace deepsc {

bool SampleSequence::standard_rate() const noexcept {
  return rate == 8000 || rate == 16000 || rate == 44100;
}

FrameGrid frame(std::span<const SampleSequence> batch, std::size_t frames, std::size_t frame_len) {
  const std::size_t width = frames * frame_len;
  FrameGrid grid;
  grid.batch = batch.size();
  grid.frames = frames;
  grid.frame_len = frame_len;
  grid.data.reserve(batch.size() * width);
  for (const auto& seq : batch) {
    if (seq.size() != width) {
      throw InvalidArgument("frame: sequence has " + std::to_string(seq.size()) +
                            " samples, expected " + std::to_string(width));
    }
    grid.data.insert(grid.data.end(), seq.samples.begin(), seq.samples.end());
  }
  return grid;
}

std::vector<SampleSequence> deframe(const FrameGrid& grid, int rate) {
  const std::size_t width = grid.frames * grid.frame_len;
  if (grid.data.size() != grid.batch * width) {
    throw InvalidArgument("deframe: data size does not match B*F*L");
  }
  std::vector<SampleSequence> out(grid.batch);
  for (std::size_t b = 0; b < grid.batch; ++b) {
    auto first = grid.data.begin() + static_cast<std::ptrdiff_t>(b * width);
    out[b].samples.assign(first, first + static_cast<std::ptrdiff_t>(width));
    out[b].rate = rate;
  }
  return out;
}

std::vector<SampleSequence> fit_length(const SampleSequence& seq, std::size_t length) {
  if (length == 0) throw InvalidArgument("fit_length: zero target length");
  std::vector<SampleSequence> out;
  std::size_t pos = 0;
  do {
    SampleSequence piece{std::vector<float>(length, 0.0f), seq.rate};
    const std::size_t n = std::min(length, seq.size() - pos);
    std::copy_n(seq.samples.begin() + static_cast<std::ptrdiff_t>(pos), n, piece.samples.begin());
    out.push_back(std::move(piece));
    pos += length;
  } while (pos < seq.size());
  return out;
}

namespace {

template <class T>
SymbolBlock normalize_impl(std::span<const T> raw) {
  if (raw.size() % 2 != 0) throw InvalidArgument("normalize_power: odd number of reals");
  const std::size_t n = raw.size() / 2;
  if (n == 0) throw InvalidArgument("normalize_power: empty input");
  double energy = 0.0;
  for (T v : raw) energy += static_cast<double>(v) * static_cast<double>(v);
  if (!(energy > 0.0)) throw NumericError("normalize_power: all-zero input has no defined scale");
  SymbolBlock block;
  block.scale = 1.0 / std::sqrt(energy / static_cast<double>(n));
  block.symbols.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    block.symbols[i] = Complex(raw[2 * i] * block.scale, raw[2 * i + 1] * block.scale);
  }
  return block;
}

}  // namespace

SymbolBlock normalize_power(std::span<const double> raw) { return normalize_impl(raw); }
SymbolBlock normalize_power(std::span<const float> raw) { return normalize_impl(raw); }

double mean_power(std::span<const Complex> symbols) {
  if (symbols.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& s : symbols) acc += std::norm(s);
  return acc / static_cast<double>(symbols.size());
}

}  // namespace deepsc
