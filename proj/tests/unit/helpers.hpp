#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "deepsc/rng.hpp"
#include "deepsc/signal.hpp"

namespace test {

inline std::vector<float> random_floats(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  deepsc::Rng rng(seed, 99);
  std::vector<float> out(n);
  for (auto& v : out) v = static_cast<float>(scale * (2.0 * rng.uniform() - 1.0));
  return out;
}

inline deepsc::SampleSequence sine(double freq, int rate, std::size_t n, double amp = 0.5, double phase = 0.0) {
  deepsc::SampleSequence s;
  s.rate = rate;
  s.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    s.samples[i] = static_cast<float>(amp * std::sin(2.0 * M_PI * freq * static_cast<double>(i) / rate + phase));
  return s;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() / ("deepsc-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                                                      std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace test
