#include "deepsc/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "deepsc/error.hpp"
#include "deepsc/keyvalue.hpp"

namespace deepsc {

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw InvalidArgument(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                          std::to_string(b) + ")");
}

}  // namespace

double sdr(std::span<const float> reference, std::span<const float> estimate) {
  check_lengths(reference.size(), estimate.size(), "sdr");
  double signal = 0.0, error = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double s = reference[i];
    const double e = s - static_cast<double>(estimate[i]);
    signal += s * s;
    error += e * e;
  }
  if (signal == 0.0) throw InvalidArgument("sdr: reference is all zeros");
  if (error == 0.0) return kSdrCapDb;
  return std::min(kSdrCapDb, 10.0 * std::log10(signal / error));
}

double sdr(const SampleSequence& reference, const SampleSequence& estimate) {
  return sdr(std::span<const float>(reference.samples), std::span<const float>(estimate.samples));
}

double mse(std::span<const float> reference, std::span<const float> estimate) {
  check_lengths(reference.size(), estimate.size(), "mse");
  if (reference.empty()) throw InvalidArgument("mse: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double e = static_cast<double>(reference[i]) - static_cast<double>(estimate[i]);
    acc += e * e;
  }
  return acc / static_cast<double>(reference.size());
}

double mse(const SampleSequence& reference, const SampleSequence& estimate) {
  return mse(std::span<const float>(reference.samples), std::span<const float>(estimate.samples));
}

std::string to_csv(const MetricReport& report) {
  std::string out = std::string(kMetricCsvHeader) + "\n";
  char buf[256];
  for (const auto& r : report.rows) {
    std::string pesq = kPesqUnavailable;
    if (r.pesq) {
      std::snprintf(buf, sizeof buf, "%.4f", *r.pesq);
      pesq = buf;
    }
    std::snprintf(buf, sizeof buf, "%s,%.2f,%.9e,%.6f,%s,%zu,%llu\n", channel::to_string(r.channel).c_str(), r.snr_db,
                  r.mse, r.sdr_db, pesq.c_str(), r.count, static_cast<unsigned long long>(r.seed));
    out += buf;
  }
  return out;
}

MetricReport parse_metric_csv(std::string_view text) {
  MetricReport report;
  bool header = true;
  std::size_t line_no = 0;
  for (const auto& raw : split_list(text, '\n')) {
    ++line_no;
    if (raw.empty()) continue;
    if (header) {
      if (raw != kMetricCsvHeader) throw FormatError("metric CSV: unexpected header '" + raw + "'");
      header = false;
      continue;
    }
    const auto f = split_list(raw, ',');
    if (f.size() != 7) throw FormatError("metric CSV line " + std::to_string(line_no) + ": expected 7 fields");
    try {
      MetricRow r;
      r.channel = channel::parse_channel(f[0]);
      r.snr_db = std::stod(f[1]);
      r.mse = std::stod(f[2]);
      r.sdr_db = std::stod(f[3]);
      if (f[4] != kPesqUnavailable) r.pesq = std::stod(f[4]);
      r.count = std::stoull(f[5]);
      r.seed = std::stoull(f[6]);
      report.rows.push_back(r);
    } catch (const std::logic_error&) {
      throw FormatError("metric CSV line " + std::to_string(line_no) + ": malformed number");
    }
  }
  if (header) throw FormatError("metric CSV: missing header");
  return report;
}

}  // namespace deepsc
