#include "deepsc/error.hpp"
#include "deepsc/nn/checkpoint.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace deepsc;
using namespace deepsc::nn;

namespace {

CheckpointData sample() {
  CheckpointData d;
  d.config = "model.variant = deepsc-s\nmodel.frames = 4\n";
  d.tensors.push_back({"alpha.kernel", {3, 3, 1, 2}, test::random_floats(18, 1)});
  d.tensors.push_back({"alpha.bias", {2}, {0.5f, -0.25f}});
  d.tensors.push_back({"empty", {0}, {}});
  return d;
}

}  // namespace

TEST_CASE("FNV-1a 64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("checkpoint round trip") {
  const auto d = sample();
  const auto bytes = encode_checkpoint(d);
  CHECK(std::string(bytes.begin(), bytes.begin() + 7) == "DSCCKPT");
  CHECK(bytes[7] == 0);
  CHECK(bytes[8] == 1);
  const auto back = decode_checkpoint(bytes);
  CHECK(back.config == d.config);
  REQUIRE(back.tensors.size() == d.tensors.size());
  for (std::size_t i = 0; i < d.tensors.size(); ++i) {
    CHECK(back.tensors[i].name == d.tensors[i].name);
    CHECK(back.tensors[i].shape == d.tensors[i].shape);
    CHECK(back.tensors[i].values == d.tensors[i].values);
  }
  test::TempDir dir("ckpt");
  write_checkpoint(dir.path() / "m.ckpt", d);
  CHECK(encode_checkpoint(read_checkpoint(dir.path() / "m.ckpt")) == bytes);
}

TEST_CASE("little-endian float payload") {
  CheckpointData d;
  d.tensors.push_back({"x", {1}, {1.0f}});
  const auto bytes = encode_checkpoint(d);
  // 1.0f = 0x3F800000, stored LSB first at the end of the file.
  const std::size_t n = bytes.size();
  CHECK(bytes[n - 4] == 0x00);
  CHECK(bytes[n - 3] == 0x00);
  CHECK(bytes[n - 2] == 0x80);
  CHECK(bytes[n - 1] == 0x3F);
}

TEST_CASE("corrupt checkpoints are rejected") {
  const auto good = encode_checkpoint(sample());
  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(decode_checkpoint(bad_magic), FormatError);
  auto bad_version = good;
  bad_version[8] = 2;
  CHECK_THROWS_AS(decode_checkpoint(bad_version), FormatError);
  auto bad_config = good;
  bad_config[16] ^= 0x01;  // first config byte, digest no longer matches
  CHECK_THROWS_AS(decode_checkpoint(bad_config), FormatError);
  for (std::size_t cut : {std::size_t{3}, std::size_t{20}, good.size() - 1}) {
    std::vector<std::uint8_t> truncated(good.begin(), good.begin() + static_cast<long>(cut));
    CHECK_THROWS_AS(decode_checkpoint(truncated), FormatError);
  }
  auto trailing = good;
  trailing.push_back(0);
  CHECK_THROWS_AS(decode_checkpoint(trailing), FormatError);
  CHECK_THROWS_AS(read_checkpoint("/nonexistent/x.ckpt"), FormatError);
}
