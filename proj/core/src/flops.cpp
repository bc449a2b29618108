#include "deepsc/flops.hpp"

#include "deepsc/error.hpp"

namespace deepsc {

std::uint64_t flops_conv(const FlopsQuery& q) {
  if (q.g == 0 || q.h == 0 || q.cin == 0 || q.k == 0 || q.cout == 0)
    throw InvalidArgument("flops_conv: all dimensions must be positive");
  return 2 * q.g * q.h * (q.cin * q.k * q.k + 1) * q.cout;
}

FlopsBreakdown flops_model(const model::TransceiverConfig& cfg) {
  FlopsBreakdown out;
  for (const auto& layer : model::layer_inventory(cfg)) {
    FlopsQuery q{layer.dense ? 1 : cfg.frame_len, layer.dense ? 1 : cfg.frames, layer.cin, layer.kernel, layer.cout};
    const std::uint64_t f = flops_conv(q);
    const bool tx = layer.group == model::Group::Alpha || layer.group == model::Group::Beta;
    if (layer.extra)
      (tx ? out.transmitter_extras : out.receiver_extras) += f;
    else
      (tx ? out.transmitter : out.receiver) += f;
    out.items.push_back({layer, f});
  }
  out.total = out.transmitter + out.receiver;
  return out;
}

}  // namespace deepsc
