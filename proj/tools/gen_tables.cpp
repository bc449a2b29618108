// Regenerates the published constant tables:
//   core/data/interleaver_512.hex, core/data/gray_qam64.hex, core/src/interleaver_table.cpp
// Usage: deepsc_gen_tables <repo-root>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <vector>

namespace {

constexpr std::size_t kLength = 512;
constexpr std::uint64_t kSeed = 0x5EED;

// Kept independent of the library so the table can be rebuilt from scratch.
std::vector<std::uint32_t> permutation() {
  std::vector<std::uint32_t> perm(kLength);
  for (std::size_t i = 0; i < kLength; ++i) perm[i] = static_cast<std::uint32_t>(i);
  std::mt19937_64 gen(kSeed);
  for (std::size_t i = kLength; i > 1; --i) std::swap(perm[i - 1], perm[gen() % i]);
  return perm;
}

int gray_level(unsigned label) {
  static const int pos[8] = {0, 1, 3, 2, 7, 6, 4, 5};
  return 2 * pos[label & 7u] - 7;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: " << argv[0] << " <repo-root>\n";
    return 2;
  }
  const std::filesystem::path root = argv[1];
  const auto perm = permutation();

  {
    std::ofstream out(root / "core/data/interleaver_512.hex");
    out << "# deepsc turbo interleaver v1\n"
        << "# length=512 seed=0x5EED generator=mt19937_64 fisher-yates (j = next() % (i+1), i descending)\n"
        << "# line k holds the natural-order index read at interleaved position k\n";
    char buf[16];
    for (auto v : perm) {
      std::snprintf(buf, sizeof buf, "%03x\n", v);
      out << buf;
    }
  }
  {
    std::ofstream out(root / "core/data/gray_qam64.hex");
    out << "# deepsc gray 64-QAM map v1\n"
        << "# label(hex, b0 first = MSB) I-level Q-level; point = (I + jQ) / sqrt(42)\n";
    char buf[32];
    for (unsigned l = 0; l < 64; ++l) {
      std::snprintf(buf, sizeof buf, "%02x %+d %+d\n", l, gray_level(l >> 3), gray_level(l));
      out << buf;
    }
  }
  {
    std::ofstream out(root / "core/src/interleaver_table.cpp");
    out << "// Generated by tools/gen_tables.cpp. Do not edit.\n\n"
        << "#include \"deepsc/turbo.hpp\"\n\n"
        << "namespace deepsc::classic {\n\n"
        << "namespace {\n"
        << "constexpr std::uint32_t kInterleaver512[512] = {\n";
    for (std::size_t i = 0; i < perm.size(); ++i) {
      if (i % 12 == 0) out << "    ";
      out << perm[i] << (i + 1 < perm.size() ? "," : "");
      out << ((i % 12 == 11 || i + 1 == perm.size()) ? "\n" : " ");
    }
    out << "};\n"
        << "}  // namespace\n\n"
        << "std::span<const std::uint32_t> standard_interleaver() { return kInterleaver512; }\n\n"
        << "}  // namespace deepsc::classic\n";
  }
  return 0;
}
