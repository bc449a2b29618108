#include "deepsc/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "deepsc/error.hpp"

namespace deepsc {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

double kaiser(double x, double half_width, double beta) {
  const double r = x / half_width;
  if (std::abs(r) > 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - r * r)) / std::cyl_bessel_i(0.0, beta);
}

}  // namespace

SampleSequence resample(const SampleSequence& seq, int target_rate, const ResamplerConfig& cfg) {
  if (target_rate <= 0) throw InvalidArgument("resample: target rate must be positive");
  if (seq.rate <= 0) throw InvalidArgument("resample: source rate must be positive");
  if (cfg.taps_per_phase < 2) throw InvalidArgument("resample: need at least 2 taps per phase");
  if (target_rate == seq.rate) return seq;

  const long g = std::gcd(static_cast<long>(seq.rate), static_cast<long>(target_rate));
  const long up = target_rate / g;
  const long down = seq.rate / g;
  const auto out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(seq.size()) * target_rate / static_cast<double>(seq.rate)));

  // Cutoff in cycles per input sample.
  const double fc = cfg.cutoff * std::min(seq.rate, target_rate) / static_cast<double>(seq.rate);
  const int taps = cfg.taps_per_phase;
  const int left = taps / 2 - 1;  // taps cover input offsets [-left, taps-1-left]
  const double half_width = taps / 2.0;

  // One filter per output phase, each normalized to unit DC gain.
  std::vector<double> bank(static_cast<std::size_t>(up) * taps);
  for (long phase = 0; phase < up; ++phase) {
    const double frac = static_cast<double>(phase) / static_cast<double>(up);
    double* h = &bank[static_cast<std::size_t>(phase) * taps];
    double sum = 0.0;
    for (int j = 0; j < taps; ++j) {
      const double tau = static_cast<double>(j - left) - frac;
      h[j] = 2.0 * fc * sinc(2.0 * fc * tau) * kaiser(tau, half_width, cfg.kaiser_beta);
      sum += h[j];
    }
    for (int j = 0; j < taps; ++j) h[j] /= sum;
  }

  SampleSequence out{std::vector<float>(out_len), target_rate};
  const auto n_in = static_cast<long>(seq.size());
  for (std::size_t n = 0; n < out_len; ++n) {
    const long num = static_cast<long>(n) * down;
    const long base = num / up;
    const long phase = num % up;
    const double* h = &bank[static_cast<std::size_t>(phase) * taps];
    double acc = 0.0;
    for (int j = 0; j < taps; ++j) {
      const long idx = base + j - left;
      if (idx >= 0 && idx < n_in) acc += h[j] * seq.samples[static_cast<std::size_t>(idx)];
    }
    out.samples[n] = static_cast<float>(std::clamp(acc, -1.0, 1.0));
  }
  return out;
}

}  // namespace deepsc
