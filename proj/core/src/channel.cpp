#include "deepsc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "deepsc/error.hpp"
#include "deepsc/keyvalue.hpp"

namespace deepsc::channel {

namespace {
constexpr double kMinGain = 1e-12;
}

std::string to_string(const ChannelKind& kind) {
  switch (kind.fading) {
    case Fading::Awgn:
      return "awgn";
    case Fading::Rayleigh:
      return "rayleigh";
    case Fading::Rician:
      if (kind.k_factor == 1.0) return "rician";
      return "rician:" + format_double(kind.k_factor);
  }
  return "unknown";
}

ChannelKind parse_channel(std::string_view text) {
  if (text == "awgn" || text == "AWGN") return ChannelKind::awgn();
  if (text == "rayleigh" || text == "Rayleigh") return ChannelKind::rayleigh();
  if (text == "rician" || text == "Rician") return ChannelKind::rician();
  if (text.starts_with("rician:")) {
    const std::string k(text.substr(7));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(k, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != k.size() || !(value >= 0.0)) {
      throw InvalidArgument("channel: bad Rician k-factor '" + k + "'");
    }
    return ChannelKind::rician(value);
  }
  throw InvalidArgument("channel: unknown kind '" + std::string(text) + "'");
}

double snr_to_noise_variance(double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  if (!std::isfinite(snr_db)) throw InvalidArgument("snr_to_noise_variance: SNR must be finite or +inf");
  return std::pow(10.0, -snr_db / 10.0);
}

Complex sample_channel(const ChannelKind& kind, Rng& rng) {
  switch (kind.fading) {
    case Fading::Awgn:
      return {1.0, 0.0};
    case Fading::Rayleigh: {
      const double s = std::sqrt(0.5);
      const double re = rng.normal();
      const double im = rng.normal();
      return {s * re, s * im};
    }
    case Fading::Rician: {
      if (!(kind.k_factor >= 0.0)) throw InvalidArgument("sample_channel: negative k-factor");
      const double k = kind.k_factor;
      const double los = std::sqrt(k / (k + 1.0));
      const double s = std::sqrt(0.5 / (k + 1.0));
      const double re = rng.normal();
      const double im = rng.normal();
      return {los + s * re, s * im};
    }
  }
  return {1.0, 0.0};
}

ChannelRealization realize(const ChannelKind& kind, double snr_db, Rng& rng) {
  ChannelRealization real;
  real.snr_db = snr_db;
  real.noise_variance = snr_to_noise_variance(snr_db);
  real.h = sample_channel(kind, rng);
  return real;
}

std::vector<Complex> transmit(std::span<const Complex> x, const ChannelRealization& real, Rng& rng) {
  std::vector<Complex> y(x.size());
  const double s = std::sqrt(real.noise_variance / 2.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = real.h * x[i];
    if (s > 0.0) {
      const double re = rng.normal();
      const double im = rng.normal();
      y[i] += Complex(s * re, s * im);
    }
  }
  return y;
}

std::vector<Complex> equalize(std::span<const Complex> y, const ChannelRealization& real) {
  if (std::abs(real.h) < kMinGain) throw NumericError("equalize: degenerate channel gain");
  std::vector<Complex> out(y.size());
  if (real.h == Complex(1.0, 0.0)) {
    std::copy(y.begin(), y.end(), out.begin());
    return out;
  }
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] / real.h;
  return out;
}

double equalized_noise_variance(const ChannelRealization& real) {
  const double g = std::norm(real.h);
  if (g < kMinGain * kMinGain) return std::numeric_limits<double>::infinity();
  return real.noise_variance / g;
}

}  // namespace deepsc::channel
