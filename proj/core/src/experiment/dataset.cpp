#include "deepsc/experiment/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "deepsc/error.hpp"
#include "deepsc/keyvalue.hpp"
#include "deepsc/resample.hpp"
#include "deepsc/rng.hpp"
#include "deepsc/wav.hpp"

namespace deepsc::experiment {

namespace fs = std::filesystem;

std::vector<ManifestEntry> parse_manifest(std::string_view text, const fs::path& base_dir) {
  std::vector<ManifestEntry> out;
  std::size_t line_no = 0;
  for (const auto& raw : split_list(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.rfind(',');
    if (comma == std::string_view::npos)
      throw FormatError("manifest line " + std::to_string(line_no) + ": expected 'path,split'");
    const auto path = trim(line.substr(0, comma));
    const auto split = trim(line.substr(comma + 1));
    if (path.empty()) throw FormatError("manifest line " + std::to_string(line_no) + ": empty path");
    ManifestEntry e;
    e.path = fs::path(std::string(path));
    if (e.path.is_relative() && !base_dir.empty()) e.path = base_dir / e.path;
    if (split == "train")
      e.split = Split::Train;
    else if (split == "test")
      e.split = Split::Test;
    else
      throw FormatError("manifest line " + std::to_string(line_no) + ": unknown split '" + std::string(split) + "'");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ManifestEntry> read_manifest(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw FormatError("cannot open manifest " + manifest.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), manifest.parent_path());
}

std::vector<SampleSequence> ingest_dataset(const fs::path& manifest, Split split, int rate, std::size_t length) {
  std::vector<SampleSequence> out;
  for (const auto& e : read_manifest(manifest)) {
    if (e.split != split) continue;
    if (!fs::exists(e.path)) throw FormatError("manifest entry not found: " + e.path.string());
    auto seq = load_wav(e.path);
    if (seq.rate != rate) seq = resample(seq, rate);
    for (auto& piece : fit_length(seq, length)) out.push_back(std::move(piece));
  }
  if (out.empty())
    throw InvalidArgument(std::string("manifest has no ") + (split == Split::Train ? "train" : "test") + " entries");
  return out;
}

std::vector<SampleSequence> synthesize_corpus(std::size_t count, int rate, std::size_t length, std::uint64_t seed,
                                              std::uint64_t stream) {
  if (rate <= 0 || length < 64) throw InvalidArgument("synthesize_corpus: bad rate or length");
  std::vector<SampleSequence> out;
  out.reserve(count);
  const double two_pi = 2.0 * std::numbers::pi;
  const double f_max = std::min(3000.0, 0.4 * rate);
  for (std::size_t n = 0; n < count; ++n) {
    Rng rng(seed, (stream << 32) | n);
    std::vector<double> s(length, 0.0);
    const int tones = 2 + static_cast<int>(rng.below(3));
    for (int k = 0; k < tones; ++k) {
      const double f = 100.0 + rng.uniform() * (f_max - 100.0);
      const double a = 0.05 + 0.25 * rng.uniform();
      const double phase = two_pi * rng.uniform();
      for (std::size_t i = 0; i < length; ++i) s[i] += a * std::sin(two_pi * f * static_cast<double>(i) / rate + phase);
    }
    for (int k = 0; k < 2; ++k) {
      const std::size_t start = rng.below(length);
      const std::size_t len = length / 16 + rng.below(length / 4 - length / 16);
      for (std::size_t i = start; i < std::min(length, start + len); ++i) s[i] = 0.0;
    }
    for (int k = 0; k < 2; ++k) {
      const std::size_t start = rng.below(length);
      const std::size_t len = length / 64 + rng.below(length / 16 - length / 64);
      for (std::size_t i = start; i < std::min(length, start + len); ++i) s[i] += 0.1 * rng.normal();
    }
    double peak = 0.0;
    for (double v : s) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) {
      s[0] = 1.0;
      peak = 1.0;
    }
    SampleSequence seq;
    seq.rate = rate;
    seq.samples.resize(length);
    for (std::size_t i = 0; i < length; ++i) seq.samples[i] = static_cast<float>(0.95 * s[i] / peak);
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace deepsc::experiment
