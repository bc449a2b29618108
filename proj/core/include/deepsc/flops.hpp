#pragma once

#include <cstdint>
#include <vector>

#include "deepsc/model/transceiver.hpp"

namespace deepsc {

/// Input map G (width) x H (height), Cin channels, K x K kernel, Cout filters.
struct FlopsQuery {
  std::uint64_t g = 0;
  std::uint64_t h = 0;
  std::uint64_t cin = 0;
  std::uint64_t k = 0;
  std::uint64_t cout = 0;
};

/// 2 G H (Cin K^2 + 1) Cout. Throws InvalidArgument on a zero field.
std::uint64_t flops_conv(const FlopsQuery& q);

struct FlopsItem {
  model::LayerSpec layer;
  std::uint64_t flops = 0;
};

/// Headline counts cover the conv modules only; residual projections and
/// SE dense layers are summed into the extras.
struct FlopsBreakdown {
  std::uint64_t transmitter = 0;
  std::uint64_t receiver = 0;
  std::uint64_t total = 0;
  std::uint64_t transmitter_extras = 0;
  std::uint64_t receiver_extras = 0;
  std::vector<FlopsItem> items;
};

FlopsBreakdown flops_model(const model::TransceiverConfig& cfg);

}  // namespace deepsc
