#include <cmath>

#include "deepsc/resample.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace deepsc;

namespace {

double max_error(const SampleSequence& got, const SampleSequence& want, std::size_t trim) {
  double worst = 0;
  for (std::size_t i = trim; i + trim < got.size(); ++i)
    worst = std::max(worst, std::abs(static_cast<double>(got.samples[i]) - want.samples[i]));
  return worst;
}

}  // namespace

TEST_CASE("same rate is the identity") {
  const auto s = test::sine(440, 16000, 1000);
  const auto r = resample(s, 16000);
  CHECK(r.samples == s.samples);
  CHECK(r.rate == 16000);
}

TEST_CASE("16 kHz to 8 kHz halves the length") {
  const auto s = test::sine(440, 16000, 16384);
  const auto r = resample(s, 8000);
  CHECK(r.size() == 8192);
  CHECK(r.rate == 8000);
}

TEST_CASE("1 kHz sine survives 16k to 8k") {
  const auto s = test::sine(1000, 16000, 16000, 0.5, 0.3);
  const auto r = resample(s, 8000);
  const auto want = test::sine(1000, 8000, 8000, 0.5, 0.3);
  CHECK(max_error(r, want, 64) < 1e-3);
}

TEST_CASE("44.1 kHz to 8 kHz keeps a 500 Hz tone") {
  const auto s = test::sine(500, 44100, 44100, 0.4);
  const auto r = resample(s, 8000);
  CHECK(r.size() == 8000);
  CHECK(max_error(r, test::sine(500, 8000, 8000, 0.4), 64) < 1e-3);
}

TEST_CASE("rational round trip recovers a band-limited input") {
  for (auto [a, b] : {std::pair{8000, 16000}, std::pair{16000, 8000}, std::pair{8000, 44100}}) {
    CAPTURE(a);
    CAPTURE(b);
    auto s = test::sine(700, a, 4000, 0.3);
    const auto extra = test::sine(1300, a, 4000, 0.2, 1.0);
    for (std::size_t i = 0; i < s.size(); ++i) s.samples[i] += extra.samples[i];
    const auto back = resample(resample(s, b), a);
    REQUIRE(back.size() == s.size());
    CHECK(max_error(back, s, 128) < 1e-3);
  }
}
