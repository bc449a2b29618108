#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deepsc/channel.hpp"
#include "deepsc/signal.hpp"

namespace deepsc {

/// Value returned by sdr() when the estimate is exact.
inline constexpr double kSdrCapDb = 300.0;

/// 10 log10(|s|^2 / |s - s_hat|^2), accumulated in double. Throws
/// InvalidArgument on a length mismatch or an all-zero reference.
double sdr(std::span<const float> reference, std::span<const float> estimate);
double sdr(const SampleSequence& reference, const SampleSequence& estimate);

/// Mean squared error per sample.
double mse(std::span<const float> reference, std::span<const float> estimate);
double mse(const SampleSequence& reference, const SampleSequence& estimate);

struct MetricRow {
  channel::ChannelKind channel;
  double snr_db = 0.0;
  double mse = 0.0;
  double sdr_db = 0.0;
  std::optional<double> pesq;
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

struct MetricReport {
  std::vector<MetricRow> rows;
};

inline constexpr const char* kMetricCsvHeader = "channel,snr_db,mse,sdr_db,pesq,count,seed";
/// Written in place of a PESQ score the evaluator could not provide.
inline constexpr const char* kPesqUnavailable = "unavailable";

/// Fixed header, one row per (channel, SNR) in report order. Numbers are
/// printed with fixed precision so reruns compare byte-for-byte.
std::string to_csv(const MetricReport& report);
MetricReport parse_metric_csv(std::string_view text);

}  // namespace deepsc
