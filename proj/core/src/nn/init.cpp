#include "deepsc/nn/init.hpp"

#include <cmath>

#include "deepsc/error.hpp"

namespace deepsc::nn {

template <class T>
std::vector<T> variance_scaling_init(std::size_t count, std::size_t fan_in, Rng& rng) {
  if (fan_in == 0) throw InvalidArgument("variance_scaling_init: fan_in must be positive");
  const double sigma = std::sqrt(1.0 / static_cast<double>(fan_in)) / kTruncatedNormalStd;
  std::vector<T> out(count);
  for (auto& v : out) {
    double z;
    do {
      z = rng.normal();
    } while (std::abs(z) > 2.0);
    v = static_cast<T>(z * sigma);
  }
  return out;
}

template std::vector<float> variance_scaling_init<float>(std::size_t, std::size_t, Rng&);
template std::vector<double> variance_scaling_init<double>(std::size_t, std::size_t, Rng&);

}  // namespace deepsc::nn
