#include <cmath>

#include "deepsc/error.hpp"
#include "deepsc/metrics.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace deepsc;

namespace {

double sdr_reference(const std::vector<float>& s, const std::vector<float>& e) {
  long double num = 0, den = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    num += static_cast<long double>(s[i]) * s[i];
    den += (static_cast<long double>(s[i]) - e[i]) * (static_cast<long double>(s[i]) - e[i]);
  }
  return static_cast<double>(10.0L * std::log10(num / den));
}

}  // namespace

TEST_CASE("sdr fixed examples") {
  const std::vector<float> s{1.0f, -2.0f, 0.5f, 3.0f};
  CHECK(sdr(s, std::vector<float>(4, 0.0f)) == doctest::Approx(0.0).epsilon(1e-12));
  // ||e||^2 = ||s||^2 / 100: e = s / 10.
  std::vector<float> close(4);
  for (int i = 0; i < 4; ++i) close[i] = s[i] + s[i] / 10.0f;
  CHECK(std::abs(sdr(s, close) - sdr_reference(s, close)) < 1e-9);
  CHECK(std::abs(sdr(s, close) - 20.0) < 1e-5);
  // Hand-computed: s = [3, 4], s_hat = [3, 3]: 10 log10(25 / 1).
  CHECK(std::abs(sdr(std::vector<float>{3, 4}, std::vector<float>{3, 3}) - 10 * std::log10(25.0)) < 1e-9);
  CHECK(std::abs(sdr(std::vector<float>{1, 1}, std::vector<float>{0.5f, 1.5f}) - 10 * std::log10(4.0)) < 1e-9);
}

TEST_CASE("sdr matches the direct formula on random pairs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = test::random_floats(500, seed);
    const auto e = test::random_floats(500, seed + 100);
    CHECK(std::abs(sdr(s, e) - sdr_reference(s, e)) < 1e-9);
  }
}

TEST_CASE("error scaling law and cap") {
  const auto s = test::random_floats(256, 1);
  CHECK(sdr(s, s) == kSdrCapDb);
  // Errors of the form 10 * 2^-k, so e and e / 10 are both exact in float.
  const float steps[] = {1.25f, -2.5f, 0.625f, 5.0f};
  std::vector<float> ref(64), big(64), small(64);
  for (std::size_t i = 0; i < 64; ++i) {
    ref[i] = static_cast<float>(static_cast<int>(i % 7) - 3);
    big[i] = ref[i] + steps[i % 4];
    small[i] = ref[i] + steps[i % 4] / 10.0f;
  }
  CHECK(std::abs((sdr(ref, small) - sdr(ref, big)) - 20.0) < 1e-9);
  CHECK_THROWS_AS(sdr(std::vector<float>(4, 0.0f), std::vector<float>(4, 1.0f)), InvalidArgument);
  CHECK_THROWS_AS(sdr(std::vector<float>(4, 1.0f), std::vector<float>(3, 1.0f)), InvalidArgument);
}

TEST_CASE("mse") {
  CHECK(mse(std::vector<float>{1, 2}, std::vector<float>{1, 4}) == doctest::Approx(2.0));
  CHECK(mse(std::vector<float>{1, 2}, std::vector<float>{1, 2}) == 0.0);
}

TEST_CASE("csv header, formatting and round trip") {
  MetricReport rep;
  rep.rows.push_back({channel::ChannelKind::rician(), 8.0, 1.25e-3, 12.5, 3.21, 16, 42});
  rep.rows.push_back({channel::ChannelKind::awgn(), -2.0, 0.5, -1.0, std::nullopt, 16, 42});
  const auto csv = to_csv(rep);
  CHECK(csv.rfind(std::string(kMetricCsvHeader) + "\n", 0) == 0);
  CHECK(csv.find("unavailable") != std::string::npos);
  const auto back = parse_metric_csv(csv);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0].channel == channel::ChannelKind::rician());
  CHECK(back.rows[0].sdr_db == doctest::Approx(12.5));
  CHECK(back.rows[0].pesq.has_value());
  CHECK(*back.rows[0].pesq == doctest::Approx(3.21));
  CHECK_FALSE(back.rows[1].pesq.has_value());
  CHECK(to_csv(back) == csv);
  CHECK_THROWS_AS(parse_metric_csv("a,b,c\n"), FormatError);
}
