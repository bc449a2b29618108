#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "deepsc/nn/ops.hpp"
#include "deepsc/nn/tensor.hpp"
#include "deepsc/rng.hpp"

namespace test {

using DTensor = deepsc::nn::Tensor<double>;

inline DTensor random_tensor(deepsc::nn::Shape shape, std::uint64_t seed, double scale = 1.0,
                             bool requires_grad = true) {
  deepsc::Rng rng(seed, 7);
  std::vector<double> v(deepsc::nn::numel(shape));
  for (auto& x : v) x = scale * rng.normal();
  return DTensor::from(std::move(shape), std::move(v), requires_grad);
}

/// Scalar loss that weights every output element: MSE against a fixed random target.
inline DTensor probe_loss(const DTensor& out, std::uint64_t seed = 1234) {
  const auto target = random_tensor(out.shape(), seed, 1.0, false);
  return deepsc::nn::mse_loss(target, out);
}

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  /// Entries whose stencil straddles a ReLU kink (central differences at eps
  /// and eps/2 disagree), left out of max_rel_error.
  std::size_t kinks = 0;
};

/// Compares backward() against central differences for every entry of every
/// tensor in `wrt` (or an evenly spaced subset of at most `max_entries` per tensor).
/// With `detect_kinks`, entries where the loss is not smooth across the stencil
/// are counted instead of compared.
inline GradCheckResult grad_check(std::vector<DTensor> wrt, const std::function<DTensor()>& loss_fn,
                                  double eps = 1e-4, std::size_t max_entries = 0, bool detect_kinks = false) {
  for (auto& t : wrt) t.zero_grad();
  loss_fn().backward();
  std::vector<std::vector<double>> analytic;
  for (const auto& t : wrt) analytic.emplace_back(t.grad().begin(), t.grad().end());

  GradCheckResult res;
  deepsc::nn::NoGradGuard guard;
  for (std::size_t ti = 0; ti < wrt.size(); ++ti) {
    auto values = wrt[ti].mutable_values();
    const std::size_t n = values.size();
    const std::size_t step = max_entries == 0 || n <= max_entries ? 1 : n / max_entries;
    for (std::size_t i = 0; i < n; i += step) {
      const double saved = values[i];
      auto central = [&](double h) {
        values[i] = saved + h;
        const double up = loss_fn().item();
        values[i] = saved - h;
        const double down = loss_fn().item();
        values[i] = saved;
        return (up - down) / (2 * h);
      };
      const double numeric = central(eps);
      const double a = analytic[ti][i];
      if (detect_kinks) {
        const double half = central(eps / 2);
        if (std::abs(numeric - half) > 1e-6 * std::max({std::abs(numeric), std::abs(half), 1e-2})) {
          ++res.kinks;
          continue;
        }
      }
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
      res.max_rel_error = std::max(res.max_rel_error, rel);
      ++res.checked;
    }
  }
  return res;
}

}  // namespace test
