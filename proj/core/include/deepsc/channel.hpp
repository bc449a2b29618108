#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deepsc/rng.hpp"
#include "deepsc/signal.hpp"

namespace deepsc::channel {

enum class Fading { Awgn, Rayleigh, Rician };

/// Channel model. `k_factor` is the Rician LOS-to-scatter power ratio and is
/// ignored for the other two kinds.
struct ChannelKind {
  Fading fading = Fading::Awgn;
  double k_factor = 1.0;

  static ChannelKind awgn() { return {Fading::Awgn, 1.0}; }
  static ChannelKind rayleigh() { return {Fading::Rayleigh, 1.0}; }
  static ChannelKind rician(double k = 1.0) { return {Fading::Rician, k}; }

  bool operator==(const ChannelKind&) const = default;
};

/// "awgn", "rayleigh", "rician" or "rician:<k>".
std::string to_string(const ChannelKind& kind);
ChannelKind parse_channel(std::string_view text);

/// One block-fading draw: a flat complex gain held over a whole sequence.
struct ChannelRealization {
  Complex h{1.0, 0.0};
  double snr_db = 0.0;
  double noise_variance = 0.0;
};

/// sigma^2 = 10^(-snr/10) relative to unit symbol power; +inf dB gives 0.
double snr_to_noise_variance(double snr_db);

/// AWGN: exactly 1. Rayleigh: CN(0, 1). Rician(k): sqrt(k/(k+1)) + CN(0, 1/(k+1)).
Complex sample_channel(const ChannelKind& kind, Rng& rng);

ChannelRealization realize(const ChannelKind& kind, double snr_db, Rng& rng);

/// y_i = h x_i + w_i with w_i ~ CN(0, sigma^2), sigma^2/2 per real dimension.
std::vector<Complex> transmit(std::span<const Complex> x, const ChannelRealization& real, Rng& rng);

/// Zero-forcing with perfect CSI: y_i / h. Throws NumericError when |h| < 1e-12.
std::vector<Complex> equalize(std::span<const Complex> y, const ChannelRealization& real);

/// Noise variance seen after zero-forcing, sigma^2 / |h|^2.
double equalized_noise_variance(const ChannelRealization& real);

}  // namespace deepsc::channel
