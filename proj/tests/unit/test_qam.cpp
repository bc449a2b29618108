#include <bitset>
#include <cmath>
#include <fstream>
#include <sstream>

#include "deepsc/error.hpp"
#include "deepsc/qam.hpp"
#include "deepsc/rng.hpp"
#include "doctest.h"

using namespace deepsc;
using namespace deepsc::classic;

namespace {

Bits label_bits(unsigned label) {
  Bits b(6);
  for (int i = 0; i < 6; ++i) b[i] = static_cast<std::uint8_t>((label >> (5 - i)) & 1u);
  return b;
}

// Max-log LLR by brute-force enumeration of all 64 points.
std::array<double, 6> brute_llr(Complex y, double sigma2) {
  std::array<double, 6> out{};
  for (int bit = 0; bit < 6; ++bit) {
    double d0 = INFINITY, d1 = INFINITY;
    for (unsigned label = 0; label < 64; ++label) {
      const double d = std::norm(y - qam64::point(label));
      if ((label >> (5 - bit)) & 1u)
        d1 = std::min(d1, d);
      else
        d0 = std::min(d0, d);
    }
    out[bit] = std::clamp((d1 - d0) / sigma2, -kLlrClamp, kLlrClamp);
  }
  return out;
}

}  // namespace

TEST_CASE("000000 is the lower-left corner") {
  const auto block = qam64_modulate(label_bits(0));
  REQUIRE(block.size() == 1);
  CHECK(std::abs(block.symbols[0] - Complex(-7, -7) / std::sqrt(42.0)) < 1e-12);
}

TEST_CASE("Gray property along each axis") {
  std::array<unsigned, 8> by_level{};
  for (unsigned l = 0; l < 8; ++l) by_level[(qam64::axis_level(l) + 7) / 2] = l;
  for (int i = 0; i + 1 < 8; ++i) CHECK(std::bitset<3>(by_level[i] ^ by_level[i + 1]).count() == 1);
  // Neighbouring constellation points differ in exactly one bit.
  const auto& pts = qam64::constellation();
  const double step = 2 * qam64::kScale;
  for (unsigned a = 0; a < 64; ++a)
    for (unsigned b = 0; b < 64; ++b)
      if (std::abs(std::abs(pts[a] - pts[b]) - step) < 1e-9) CHECK(std::bitset<6>(a ^ b).count() == 1);
}

TEST_CASE("unit average power") {
  double p = 0;
  for (const auto& z : qam64::constellation()) p += std::norm(z);
  CHECK(p / 64 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("published Gray table matches") {
  std::ifstream f(std::string(DEEPSC_DATA_DIR) + "/gray_qam64.hex");
  REQUIRE(f.good());
  std::string line;
  int rows = 0;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in(line);
    std::string hex;
    int i = 0, q = 0;
    in >> hex >> i >> q;
    const auto label = static_cast<unsigned>(std::stoul(hex, nullptr, 16));
    CHECK(std::abs(qam64::point(label) - Complex(i, q) * qam64::kScale) < 1e-12);
    ++rows;
  }
  CHECK(rows == 64);
}

TEST_CASE("LLR signs reproduce the label on a point") {
  for (unsigned label = 0; label < 64; ++label) {
    const std::vector<Complex> y{qam64::point(label)};
    const auto llr = qam64_soft_demod(y, 1e-3);
    const auto bits = label_bits(label);
    for (int i = 0; i < 6; ++i) CHECK((llr[i] < 0) == (bits[i] == 1));
    const auto hard = qam64_hard_demod(y, 2.0);
    for (int i = 0; i < 6; ++i) CHECK(hard[i] == (bits[i] ? -2.0 : 2.0));
  }
}

TEST_CASE("origin is equidistant for the sign bits") {
  const std::vector<Complex> y{{0, 0}};
  const auto llr = qam64_soft_demod(y, 0.1);
  CHECK(llr[0] == doctest::Approx(0.0));
  CHECK(llr[3] == doctest::Approx(0.0));
  const auto brute = brute_llr({0, 0}, 0.1);
  for (int i = 0; i < 6; ++i) CHECK(llr[i] == doctest::Approx(brute[i]));
}

TEST_CASE("soft demapping equals brute-force max-log") {
  Rng rng(8);
  for (int t = 0; t < 500; ++t) {
    const Complex y{1.3 * rng.normal(), 1.3 * rng.normal()};
    const double sigma2 = 0.01 + rng.uniform();
    const auto llr = qam64_soft_demod(std::vector<Complex>{y}, sigma2);
    const auto brute = brute_llr(y, sigma2);
    for (int i = 0; i < 6; ++i) CHECK(llr[i] == doctest::Approx(brute[i]).epsilon(1e-9));
  }
}

TEST_CASE("modulation errors") {
  CHECK_THROWS_AS(qam64_modulate(Bits(7, 0)), InvalidArgument);
  CHECK_THROWS_AS(qam64_soft_demod(std::vector<Complex>{{0, 0}}, 0.0), InvalidArgument);
}
