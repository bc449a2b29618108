#include <benchmark/benchmark.h>

#include "deepsc/model/transceiver.hpp"
#include "deepsc/nn/ops.hpp"
#include "deepsc/rng.hpp"

using namespace deepsc;

namespace {

nn::Tensor<float> filled(std::vector<std::size_t> shape, std::uint64_t seed) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  Rng rng(seed);
  std::vector<float> v(n);
  for (auto& x : v) x = static_cast<float>(rng.normal());
  return nn::Tensor<float>::from(std::move(shape), std::move(v));
}

}  // namespace

static void BM_Conv2dForward(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto x = filled({1, 128, 128, c}, 1);
  const auto k = filled({5, 5, c, c}, 2);
  const auto b = filled({c}, 3);
  nn::NoGradGuard guard;
  for (auto _ : state) {
    auto y = nn::conv2d(x, k, b);
    benchmark::DoNotOptimize(y.values().data());
  }
  state.SetItemsProcessed(state.iterations() * 2 * 128 * 128 * 25 * static_cast<int64_t>(c * c));
}
BENCHMARK(BM_Conv2dForward)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_Conv2dBackward(benchmark::State& state) {
  auto x = filled({1, 128, 128, 32}, 1);
  const auto b = filled({32}, 3);
  auto init = filled({5, 5, 32, 32}, 2);
  auto k = nn::Tensor<float>::parameter(init.shape(), {init.values().begin(), init.values().end()}, "k");
  for (auto _ : state) {
    auto loss = nn::mse_loss(x, nn::conv2d(x, k, b));
    loss.backward();
    k.zero_grad();
  }
}
BENCHMARK(BM_Conv2dBackward)->Unit(benchmark::kMillisecond);

static void BM_TransceiverForward(benchmark::State& state) {
  const auto cfg = model::TransceiverConfig::telephone();
  model::Transceiver<float> net(cfg, 42);
  const auto m = filled({1, cfg.frames, cfg.frame_len, 1}, 4);
  nn::NoGradGuard guard;
  for (auto _ : state) {
    auto x = net.channel_encode(net.semantic_encode(m));
    benchmark::DoNotOptimize(x.values().data());
  }
}
BENCHMARK(BM_TransceiverForward)->Unit(benchmark::kMillisecond);
