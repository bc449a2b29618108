#include "deepsc/turbo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "deepsc/error.hpp"

namespace deepsc::classic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kTail = Rsc::kMemory;

double clamp_llr(double v) { return std::clamp(v, -kLlrClamp, kLlrClamp); }

/// Runs one constituent encoder over `input`, appending parity to `parity`,
/// then terminates and returns the tail (systematic, parity) bits.
void rsc_encode(std::span<const std::uint8_t> input, Bits& parity, Bits& tail_sys, Bits& tail_par) {
  int state = 0;
  for (std::uint8_t u : input) {
    parity.push_back(static_cast<std::uint8_t>(Rsc::parity(state, u)));
    state = Rsc::next_state(state, u);
  }
  for (std::size_t i = 0; i < kTail; ++i) {
    const int u = Rsc::tail_input(state);
    tail_sys.push_back(static_cast<std::uint8_t>(u));
    tail_par.push_back(static_cast<std::uint8_t>(Rsc::parity(state, u)));
    state = Rsc::next_state(state, u);
  }
}

}  // namespace

std::vector<std::uint32_t> make_interleaver(std::size_t length, std::uint64_t seed) {
  std::vector<std::uint32_t> perm(length);
  for (std::size_t i = 0; i < length; ++i) perm[i] = static_cast<std::uint32_t>(i);
  std::mt19937_64 gen(seed);
  for (std::size_t i = length; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(gen() % i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

TurboConfig TurboConfig::standard() {
  TurboConfig cfg;
  const auto table = standard_interleaver();
  cfg.interleaver.assign(table.begin(), table.end());
  return cfg;
}

void TurboConfig::validate() const {
  if (block_length == 0) throw InvalidArgument("turbo: zero block length");
  if (iterations < 1) throw InvalidArgument("turbo: need at least one iteration");
  if (interleaver.size() != block_length) {
    throw InvalidArgument("turbo: interleaver length " + std::to_string(interleaver.size()) +
                          " != block length " + std::to_string(block_length));
  }
  std::vector<bool> seen(block_length, false);
  for (auto idx : interleaver) {
    if (idx >= block_length || seen[idx]) throw InvalidArgument("turbo: interleaver is not a permutation");
    seen[idx] = true;
  }
}

std::size_t coded_length(const TurboConfig& cfg) { return 3 * cfg.block_length + 4 * kTail; }

Bits turbo_encode(std::span<const std::uint8_t> info, const TurboConfig& cfg) {
  const std::size_t k = cfg.block_length;
  if (info.size() != k) {
    throw InvalidArgument("turbo_encode: got " + std::to_string(info.size()) + " bits, block length is " +
                          std::to_string(k));
  }
  if (cfg.interleaver.size() != k) throw InvalidArgument("turbo_encode: interleaver size mismatch");

  Bits interleaved(k);
  for (std::size_t i = 0; i < k; ++i) interleaved[i] = info[cfg.interleaver[i]];

  Bits par1, par2, t1s, t1p, t2s, t2p;
  par1.reserve(k);
  par2.reserve(k);
  rsc_encode(info, par1, t1s, t1p);
  rsc_encode(interleaved, par2, t2s, t2p);

  Bits out;
  out.reserve(coded_length(cfg));
  for (auto b : info) out.push_back(b & 1u);
  out.insert(out.end(), par1.begin(), par1.end());
  out.insert(out.end(), par2.begin(), par2.end());
  out.insert(out.end(), t1s.begin(), t1s.end());
  out.insert(out.end(), t1p.begin(), t1p.end());
  out.insert(out.end(), t2s.begin(), t2s.end());
  out.insert(out.end(), t2p.begin(), t2p.end());
  return out;
}

std::vector<double> sova_decode(std::span<const double> sys, std::span<const double> par,
                                std::span<const double> apriori) {
  const std::size_t k = apriori.size();
  const std::size_t n = k + kTail;
  if (sys.size() != n || par.size() != n) throw InvalidArgument("sova_decode: LLR length mismatch");

  constexpr int S = Rsc::kStates;
  struct Survivor {
    std::int8_t pred = -1;
    std::int8_t input = 0;
    std::int8_t rival_pred = -1;
    std::int8_t rival_input = 0;
    double delta = kInf;
  };
  std::vector<std::array<Survivor, S>> trellis(n);

  std::array<double, S> metric;
  metric.fill(kNegInf);
  metric[0] = 0.0;

  for (std::size_t t = 0; t < n; ++t) {
    std::array<double, S> best, second;
    best.fill(kNegInf);
    second.fill(kNegInf);
    auto& step = trellis[t];
    const double la = t < k ? apriori[t] : 0.0;
    for (int s = 0; s < S; ++s) {
      if (metric[s] == kNegInf) continue;
      for (int u = 0; u < 2; ++u) {
        if (t >= k && u != Rsc::tail_input(s)) continue;
        const int p = Rsc::parity(s, u);
        const int ns = Rsc::next_state(s, u);
        const double gamma = 0.5 * ((u ? -1.0 : 1.0) * (sys[t] + la) + (p ? -1.0 : 1.0) * par[t]);
        const double cand = metric[s] + gamma;
        auto& sv = step[ns];
        if (cand > best[ns]) {
          second[ns] = best[ns];
          sv.rival_pred = sv.pred;
          sv.rival_input = sv.input;
          best[ns] = cand;
          sv.pred = static_cast<std::int8_t>(s);
          sv.input = static_cast<std::int8_t>(u);
        } else if (cand > second[ns]) {
          second[ns] = cand;
          sv.rival_pred = static_cast<std::int8_t>(s);
          sv.rival_input = static_cast<std::int8_t>(u);
        }
      }
    }
    double top = kNegInf;
    for (int s = 0; s < S; ++s) {
      step[s].delta = second[s] == kNegInf ? kInf : best[s] - second[s];
      top = std::max(top, best[s]);
    }
    for (int s = 0; s < S; ++s) metric[s] = best[s] == kNegInf ? kNegInf : best[s] - top;
  }

  // Maximum-likelihood path ends in state 0 because both tails are terminated.
  std::vector<int> ml_state(n + 1);
  std::vector<std::int8_t> ml_input(n);
  ml_state[n] = 0;
  for (std::size_t t = n; t-- > 0;) {
    const auto& sv = trellis[t][ml_state[t + 1]];
    ml_input[t] = sv.input;
    ml_state[t] = sv.pred;
  }

  // Hagenauer reliability update: each merge on the ML path caps the
  // reliability of every earlier decision on which the discarded path disagrees.
  std::vector<double> reliability(n, kInf);
  for (std::size_t t = 0; t < n; ++t) {
    const auto& sv = trellis[t][ml_state[t + 1]];
    if (sv.delta == kInf || sv.rival_pred < 0) continue;
    const double d = sv.delta;
    if (sv.rival_input != ml_input[t]) reliability[t] = std::min(reliability[t], d);
    int c = sv.rival_pred;
    for (std::size_t j = t; j-- > 0;) {
      if (c == ml_state[j + 1]) break;
      const auto& back = trellis[j][c];
      if (back.input != ml_input[j]) reliability[j] = std::min(reliability[j], d);
      c = back.pred;
    }
  }

  std::vector<double> out(k);
  for (std::size_t t = 0; t < k; ++t) {
    const double r = std::min(reliability[t], 1e6);
    out[t] = ml_input[t] ? -r : r;
  }
  return out;
}

Bits turbo_decode(std::span<const double> llrs, const TurboConfig& cfg) {
  const std::size_t k = cfg.block_length;
  if (llrs.size() != coded_length(cfg)) {
    throw InvalidArgument("turbo_decode: got " + std::to_string(llrs.size()) + " LLRs, expected " +
                          std::to_string(coded_length(cfg)));
  }
  if (cfg.interleaver.size() != k) throw InvalidArgument("turbo_decode: interleaver size mismatch");
  const auto& pi = cfg.interleaver;
  const std::size_t n = k + kTail;

  std::vector<double> sys1(n), par1(n), sys2(n), par2(n);
  for (std::size_t i = 0; i < k; ++i) {
    sys1[i] = clamp_llr(llrs[i]);
    par1[i] = clamp_llr(llrs[k + i]);
    par2[i] = clamp_llr(llrs[2 * k + i]);
  }
  for (std::size_t i = 0; i < k; ++i) sys2[i] = sys1[pi[i]];
  const std::size_t tail = 3 * k;
  for (std::size_t i = 0; i < kTail; ++i) {
    sys1[k + i] = clamp_llr(llrs[tail + i]);
    par1[k + i] = clamp_llr(llrs[tail + kTail + i]);
    sys2[k + i] = clamp_llr(llrs[tail + 2 * kTail + i]);
    par2[k + i] = clamp_llr(llrs[tail + 3 * kTail + i]);
  }

  std::vector<double> apriori1(k, 0.0), apriori2(k), posterior(k);
  for (int it = 0; it < cfg.iterations; ++it) {
    const auto l1 = sova_decode(sys1, par1, apriori1);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t src = pi[i];
      apriori2[i] = clamp_llr(cfg.extrinsic_scale * (l1[src] - sys1[src] - apriori1[src]));
    }
    const auto l2 = sova_decode(sys2, par2, apriori2);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t dst = pi[i];
      apriori1[dst] = clamp_llr(cfg.extrinsic_scale * (l2[i] - sys2[i] - apriori2[i]));
      posterior[dst] = l2[i];
    }
  }

  Bits out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = posterior[i] < 0.0 ? 1 : 0;
  return out;
}

}  // namespace deepsc::classic
