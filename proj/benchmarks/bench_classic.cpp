#include <benchmark/benchmark.h>

#include "deepsc/qam.hpp"
#include "deepsc/rng.hpp"
#include "deepsc/turbo.hpp"

using namespace deepsc;

static void BM_TurboEncode(benchmark::State& state) {
  const auto cfg = classic::TurboConfig::standard();
  Rng rng(1);
  classic::Bits info(cfg.block_length);
  for (auto& b : info) b = static_cast<std::uint8_t>(rng.next_u32() & 1u);
  for (auto _ : state) {
    auto coded = classic::turbo_encode(info, cfg);
    benchmark::DoNotOptimize(coded.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cfg.block_length));
}
BENCHMARK(BM_TurboEncode);

static void BM_TurboDecode(benchmark::State& state) {
  const auto cfg = classic::TurboConfig::standard();
  Rng rng(2);
  classic::Bits info(cfg.block_length);
  for (auto& b : info) b = static_cast<std::uint8_t>(rng.next_u32() & 1u);
  const auto coded = classic::turbo_encode(info, cfg);
  std::vector<double> llr(coded.size());
  for (std::size_t i = 0; i < coded.size(); ++i) llr[i] = (coded[i] ? -2.0 : 2.0) + rng.normal();
  for (auto _ : state) {
    auto dec = classic::turbo_decode(llr, cfg);
    benchmark::DoNotOptimize(dec.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cfg.block_length));
}
BENCHMARK(BM_TurboDecode)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
